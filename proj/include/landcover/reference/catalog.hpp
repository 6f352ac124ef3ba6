#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace landcover::reference {

struct ClassInfo {
  int id;
  std::string name;
  char letter;  // LUCAS LC1 top-level letter
};

/// The eight-class typology. Listing order is the tie-break order used
/// throughout (ids ascend in the same order).
class ClassCatalog {
 public:
  explicit ClassCatalog(std::vector<ClassInfo> classes);

  static const ClassCatalog& standard();

  std::span<const ClassInfo> classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }
  std::vector<int> ids() const;

  bool contains(int id) const;
  std::size_t index_of(int id) const;
  const ClassInfo& by_id(int id) const;
  /// Case-sensitive lookup by display name ("Woodland").
  int id_of_name(std::string_view name) const;

 private:
  std::vector<ClassInfo> classes_;
};

namespace class_id {
inline constexpr int artificial = 1;
inline constexpr int bare = 2;
inline constexpr int cropland = 3;
inline constexpr int grassland = 4;
inline constexpr int shrubland = 5;
inline constexpr int water = 6;
inline constexpr int wetland = 7;
inline constexpr int woodland = 8;
}  // namespace class_id

/// Class id from a LUCAS LC1 code by its leading letter (A..H).
int recode_toplevel(std::string_view lc1_code);

}  // namespace landcover::reference
