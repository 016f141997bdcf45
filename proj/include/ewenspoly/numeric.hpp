#ifndef EWENSPOLY_NUMERIC_HPP
#define EWENSPOLY_NUMERIC_HPP

#include <complex>
#include <cstdint>

namespace ewenspoly {

using cdouble = std::complex<double>;

// Integer power by repeated squaring. Exponent 0 gives 1 even for z == 0.
inline cdouble cpow_int(cdouble z, std::int64_t k) {
    cdouble acc(1.0, 0.0);
    cdouble base = z;
    while (k > 0) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

}  // namespace ewenspoly

#endif
