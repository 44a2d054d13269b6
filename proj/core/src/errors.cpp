#include "gramentropy/errors.hpp"

#include <sstream>

namespace gramentropy::detail {

void throw_dimension_mismatch(const char* where, long rows_a, long cols_a, long rows_b,
                              long cols_b) {
  std::ostringstream os;
  os << where << ": dimension mismatch (" << rows_a << "x" << cols_a << " vs " << rows_b << "x"
     << cols_b << ")";
  throw InputError(os.str());
}

}  // namespace gramentropy::detail
