#include "landcover/reference/catalog.hpp"

#include <algorithm>

#include "landcover/core/error.hpp"

namespace landcover::reference {

ClassCatalog::ClassCatalog(std::vector<ClassInfo> classes) : classes_(std::move(classes)) {
  if (classes_.empty()) throw ArgumentError("class catalog: no classes");
  for (std::size_t i = 1; i < classes_.size(); ++i)
    if (classes_[i].id <= classes_[i - 1].id) throw ArgumentError("class catalog: ids must ascend");
}

const ClassCatalog& ClassCatalog::standard() {
  static const ClassCatalog catalog({
      {class_id::artificial, "Artificial land", 'A'},
      {class_id::bare, "Bare land", 'F'},
      {class_id::cropland, "Cropland", 'B'},
      {class_id::grassland, "Grassland", 'E'},
      {class_id::shrubland, "Shrubland", 'D'},
      {class_id::water, "Water", 'G'},
      {class_id::wetland, "Wetland", 'H'},
      {class_id::woodland, "Woodland", 'C'},
  });
  return catalog;
}

std::vector<int> ClassCatalog::ids() const {
  std::vector<int> out;
  for (const auto& c : classes_) out.push_back(c.id);
  return out;
}

bool ClassCatalog::contains(int id) const {
  return std::any_of(classes_.begin(), classes_.end(), [&](const ClassInfo& c) { return c.id == id; });
}

std::size_t ClassCatalog::index_of(int id) const {
  for (std::size_t i = 0; i < classes_.size(); ++i)
    if (classes_[i].id == id) return i;
  throw DataError("unknown class id " + std::to_string(id));
}

const ClassInfo& ClassCatalog::by_id(int id) const { return classes_[index_of(id)]; }

int ClassCatalog::id_of_name(std::string_view name) const {
  for (const auto& c : classes_)
    if (c.name == name) return c.id;
  throw DataError("unknown class name '" + std::string(name) + "'");
}

int recode_toplevel(std::string_view lc1_code) {
  if (!lc1_code.empty()) {
    const char letter = lc1_code.front();
    for (const auto& c : ClassCatalog::standard().classes())
      if (c.letter == letter) return c.id;
  }
  throw DataError("unknown LUCAS land cover code '" + std::string(lc1_code) + "'");
}

}  // namespace landcover::reference
