#pragma once
#include <string>

#include "wittenlab/morse_complex.hpp"

namespace wittenlab {

// Plain-text interchange for cochain complexes:
//   # comment
//   cell <id> degree=<k> kind=<NonDeg|Bd0|Bd1> f=<value> [partner=<id>]
//   delta <row id> <col id> <int>
// Entries not listed are zero. Cells may appear in any order; deltas must follow their cells.
CochainComplex parse_complex(const std::string& text);
std::string format_complex(const CochainComplex& c);
CochainComplex read_complex(const std::string& path);
void write_complex(const std::string& path, const CochainComplex& c);

}  // namespace wittenlab
