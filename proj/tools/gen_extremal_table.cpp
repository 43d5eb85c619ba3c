// Regenerates data/extremal_rational.json from the table compiled into
// classification.hpp. A ctest step diffs the shipped file against this
// output, so edits to the table must land in both places via this tool.

#include <fstream>
#include <iostream>

#include "k3kit/fibration/classification_json.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_extremal_table <output.json>\n";
    return 2;
  }
  std::ofstream out(argv[1]);
  if (!out) {
    std::cerr << "gen_extremal_table: cannot open " << argv[1] << "\n";
    return 2;
  }
  out << k3kit::extremal_table_to_json().dump(2) << "\n";
  return out ? 0 : 1;
}
