#include "airmax/wide.hpp"

#include <quadmath.h>

namespace airmax {

Wide wide_sqrt(Wide v) { return sqrtq(v); }
Wide wide_fabs(Wide v) { return fabsq(v); }

}  // namespace airmax
