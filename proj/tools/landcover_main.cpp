#include "landcover/cli/app.hpp"

int main(int argc, char** argv) { return landcover::cli::run(argc, argv); }
