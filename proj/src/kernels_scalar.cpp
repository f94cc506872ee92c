#include "bellbound/kernels.hpp"

namespace bellbound::simd {

namespace {

void axpy_scalar(std::size_t n, cd a, const cd* x, cd* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(std::size_t n, cd a, const cd* x, cd* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i];
}

cd dotc_scalar(std::size_t n, const cd* x, const cd* y) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    return {re, im};
}

void rot_scalar(std::size_t n, cd* x, cd* y, double c, cd s) {
    const cd sc = std::conj(s);
    for (std::size_t i = 0; i < n; ++i) {
        const cd xi = x[i];
        const cd yi = y[i];
        x[i] = c * xi + s * yi;
        y[i] = -sc * xi + c * yi;
    }
}

} // namespace

const KernelTable& scalar() {
    static const KernelTable table{"scalar", axpy_scalar, scale_scalar,
                                   dotc_scalar, rot_scalar};
    return table;
}

void rot_strided(std::size_t n, cd* x, std::size_t incx, cd* y,
                 std::size_t incy, double c, cd s) {
    if (incx == 1 && incy == 1) {
        rot(n, x, y, c, s);
        return;
    }
    const cd sc = std::conj(s);
    for (std::size_t i = 0; i < n; ++i) {
        cd* xp = x + i * incx;
        cd* yp = y + i * incy;
        const cd xv = *xp;
        const cd yv = *yp;
        *xp = c * xv + s * yv;
        *yp = -sc * xv + c * yv;
    }
}

} // namespace bellbound::simd
