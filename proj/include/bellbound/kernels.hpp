#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace bellbound::simd {

using cd = std::complex<double>;

// Contiguous complex-double kernels behind runtime dispatch. These carry the
// inner loops of matrix multiplication (axpy), Kronecker assembly (scale),
// inner products (dotc) and Jacobi sweeps (rot).
struct KernelTable {
    const char* name;

    // y[i] += a * x[i]
    void (*axpy)(std::size_t n, cd a, const cd* x, cd* y);

    // y[i] = a * x[i]
    void (*scale)(std::size_t n, cd a, const cd* x, cd* y);

    // sum_i conj(x[i]) * y[i]
    cd (*dotc)(std::size_t n, const cd* x, const cd* y);

    // Plane rotation with real c:
    //   (x[i], y[i]) <- (c*x[i] + s*y[i], -conj(s)*x[i] + c*y[i])
    void (*rot)(std::size_t n, cd* x, cd* y, double c, cd s);
};

const KernelTable& scalar();

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported();
const KernelTable& avx2(); // callable only when avx2_supported()
#endif

// Table picked once from CPU features; the BELLBOUND_SIMD environment
// variable (scalar | avx2) overrides the automatic choice.
const KernelTable& active();

// Names of all tables usable on this machine, for equivalence tests.
std::size_t variant_count();
const KernelTable& variant(std::size_t i);

inline void axpy(std::size_t n, cd a, const cd* x, cd* y) {
    active().axpy(n, a, x, y);
}
inline void scale(std::size_t n, cd a, const cd* x, cd* y) {
    active().scale(n, a, x, y);
}
inline cd dotc(std::size_t n, const cd* x, const cd* y) {
    return active().dotc(n, x, y);
}
inline void rot(std::size_t n, cd* x, cd* y, double c, cd s) {
    active().rot(n, x, y, c, s);
}

// Strided rotation used on matrix columns; strided access takes the scalar
// path regardless of the active table.
void rot_strided(std::size_t n, cd* x, std::size_t incx, cd* y,
                 std::size_t incy, double c, cd s);

} // namespace bellbound::simd
