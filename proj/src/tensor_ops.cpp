#include "bellbound/tensor_ops.hpp"

#include "bellbound/errors.hpp"
#include "bellbound/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace bellbound {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    kron_into(c, a, b, false);
    return c;
}

void kron_into(ComplexMatrix& c, const ComplexMatrix& a,
               const ComplexMatrix& b, bool accumulate) {
    if (c.rows() != a.rows() * b.rows() || c.cols() != a.cols() * b.cols())
        throw Error::validation("kron_into: output shape mismatch");
    const std::size_t bc = b.cols();
    for (std::size_t i1 = 0; i1 < a.rows(); ++i1) {
        for (std::size_t i2 = 0; i2 < b.rows(); ++i2) {
            cd* crow = c.row_ptr(i1 * b.rows() + i2);
            const cd* brow = b.row_ptr(i2);
            for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
                const cd aij = a.at(i1, j1);
                cd* dst      = crow + j1 * bc;
                if (accumulate)
                    simd::axpy(bc, aij, brow, dst);
                else
                    simd::scale(bc, aij, brow, dst);
            }
        }
    }
}

ComplexMatrix kron_all(const std::vector<const ComplexMatrix*>& factors) {
    if (factors.empty()) throw Error::validation("kron_all: empty factor list");
    ComplexMatrix acc = *factors[0];
    for (std::size_t k = 1; k < factors.size(); ++k)
        acc = kron(acc, *factors[k]);
    return acc;
}

ComplexMatrix partial_trace(const ComplexMatrix& w, const DimVector& dims,
                            const std::set<int>& keep) {
    if (!w.is_square()) throw Error::validation("partial_trace: non-square");
    dims.require_matches(w.rows(), "partial_trace");
    if (keep.empty())
        throw Error::validation("partial_trace: empty keep set");
    const int nf = static_cast<int>(dims.size());
    for (int k : keep)
        if (k < 0 || k >= nf)
            throw Error::validation("partial_trace: keep index " +
                                    std::to_string(k) + " out of range");

    std::vector<int> kept(keep.begin(), keep.end());
    std::vector<int> traced;
    for (int f = 0; f < nf; ++f)
        if (!keep.count(f)) traced.push_back(f);

    // Row-major strides of each tensor factor inside the flat index.
    std::vector<std::size_t> stride(nf, 1);
    for (int f = nf - 2; f >= 0; --f)
        stride[f] = stride[f + 1] * static_cast<std::size_t>(dims[f + 1]);

    std::size_t dim_keep = 1, dim_tr = 1;
    for (int f : kept) dim_keep *= static_cast<std::size_t>(dims[f]);
    for (int f : traced) dim_tr *= static_cast<std::size_t>(dims[f]);

    // Flat offsets contributed by the kept part (per reduced index) and by
    // the traced part (per diagonal traced tuple).
    std::vector<std::size_t> keep_off(dim_keep, 0);
    for (std::size_t r = 0; r < dim_keep; ++r) {
        std::size_t rest = r, off = 0;
        for (std::size_t k = kept.size(); k-- > 0;) {
            const std::size_t d = static_cast<std::size_t>(dims[kept[k]]);
            off += (rest % d) * stride[kept[k]];
            rest /= d;
        }
        keep_off[r] = off;
    }
    std::vector<std::size_t> tr_off(dim_tr, 0);
    for (std::size_t t = 0; t < dim_tr; ++t) {
        std::size_t rest = t, off = 0;
        for (std::size_t k = traced.size(); k-- > 0;) {
            const std::size_t d = static_cast<std::size_t>(dims[traced[k]]);
            off += (rest % d) * stride[traced[k]];
            rest /= d;
        }
        tr_off[t] = off;
    }

    ComplexMatrix r(dim_keep, dim_keep);
    const std::size_t full = w.rows();
    for (std::size_t i = 0; i < dim_keep; ++i) {
        for (std::size_t j = 0; j < dim_keep; ++j) {
            cd acc = 0.0;
            for (std::size_t t = 0; t < dim_tr; ++t) {
                const std::size_t row = keep_off[i] + tr_off[t];
                const std::size_t col = keep_off[j] + tr_off[t];
                acc += w.data()[row * full + col];
            }
            r.at(i, j) = acc;
        }
    }
    return r;
}

cd trace_contract(const ComplexMatrix& w, const DimVector& dims,
                  const std::vector<const ComplexMatrix*>& factors) {
    if (!w.is_square()) throw Error::validation("trace_contract: non-square");
    dims.require_matches(w.rows(), "trace_contract");
    if (factors.size() != dims.size())
        throw Error::validation("trace_contract: factor count mismatch");
    for (std::size_t f = 0; f < factors.size(); ++f)
        if (factors[f]->rows() != static_cast<std::size_t>(dims[f]) ||
            !factors[f]->is_square())
            throw Error::validation("trace_contract: factor shape mismatch");

    // Contract one site at a time: after absorbing factor f, the running
    // matrix is tr_f[W (F_f (x) I_rest)] on the remaining sites. Never
    // materializes the Kronecker chain.
    ComplexMatrix cur = w;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        const ComplexMatrix& a = *factors[f];
        const std::size_t d    = a.rows();
        const std::size_t rest = cur.rows() / d;
        ComplexMatrix next(rest, rest);
        for (std::size_t i0 = 0; i0 < d; ++i0)
            for (std::size_t j0 = 0; j0 < d; ++j0) {
                const cd scale = a.at(j0, i0);
                if (scale == cd(0.0)) continue;
                for (std::size_t i = 0; i < rest; ++i)
                    simd::axpy(rest, scale,
                               cur.row_ptr(i0 * rest + i) + j0 * rest,
                               next.row_ptr(i));
            }
        cur = std::move(next);
    }
    return cur.at(0, 0);
}

namespace {

double offdiag_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a.at(i, j));
    return std::sqrt(s);
}

} // namespace

EigResult hermitian_eig(const ComplexMatrix& a, double hermiticity_tol) {
    if (!a.is_square())
        throw Error::validation("hermitian_eig: matrix not square");
    const double herr = a.hermiticity_error();
    if (herr > hermiticity_tol)
        throw Error::validation("hermitian_eig: input not Hermitian, "
                                "deviation " +
                                std::to_string(herr));

    const std::size_t n = a.rows();
    ComplexMatrix m = a;
    // Work on the Hermitian average so tiny asymmetries cannot drift.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const cd v = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
            m.at(i, j) = v;
            m.at(j, i) = std::conj(v);
        }

    // vecs_t rows accumulate the eigenvectors (transpose of the usual V).
    ComplexMatrix vecs_t = ComplexMatrix::identity(n);

    const double scale = std::max(m.frobenius_norm(), 1e-300);
    const double stop  = 1e-14 * scale;
    const int max_sweeps = 60;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (offdiag_norm(m) <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cd apq = m.at(p, q);
                const double r = std::abs(apq);
                if (r <= 1e-300) continue;
                const double app = m.at(p, p).real();
                const double aqq = m.at(q, q).real();
                // Unitary G: columns (c, s_bar e_q-part) chosen so that
                // (G^dagger M G)[p][q] = 0. With s = sigma e^{i phi},
                // phi = arg(apq), sigma solves t^2 + 2 tau t - 1 = 0.
                const double tau = (app - aqq) / (2.0 * r);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) /
                    (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sigma = t * c;
                const cd phase = apq / r;
                const cd s = sigma * phase;

                // Rows p,q: contiguous, SIMD path.
                simd::rot(n, m.row_ptr(p), m.row_ptr(q), c, s);
                // Columns p,q: strided with conj(s).
                simd::rot_strided(n, m.data().data() + p, n,
                                  m.data().data() + q, n, c, std::conj(s));
                // Accumulate eigenvectors: V <- V G, rows of vecs_t.
                simd::rot(n, vecs_t.row_ptr(p), vecs_t.row_ptr(q), c,
                          std::conj(s));
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = m.at(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) {
                         return diag[i] > diag[j];
                     });

    EigResult out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = diag[order[k]];
        const cd* src = vecs_t.row_ptr(order[k]);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors.at(i, k) = src[i];
    }
    return out;
}

double trace_norm(const ComplexMatrix& a) {
    const EigResult eig = hermitian_eig(a);
    double s = 0.0;
    for (double v : eig.eigenvalues) s += std::abs(v);
    return s;
}

TensorPositivityReport mc_tensor_positive(const ComplexMatrix& w,
                                          const DimVector& dims, int samples,
                                          std::uint64_t seed) {
    if (!w.is_square())
        throw Error::validation("mc_tensor_positive: non-square");
    dims.require_matches(w.rows(), "mc_tensor_positive");
    if (samples < 1)
        throw Error::validation("mc_tensor_positive: samples must be >= 1");
    if (w.hermiticity_error() > kTol.structural)
        throw Error::validation("mc_tensor_positive: W not Hermitian");

    const double w_trace_norm = trace_norm(w);
    Rng rng(seed);

    TensorPositivityReport report;
    report.samples = samples;
    report.worst = std::numeric_limits<double>::infinity();
    report.worst_scaled = std::numeric_limits<double>::infinity();

    const std::size_t nf = dims.size();
    for (int it = 0; it < samples; ++it) {
        Rng sample_rng = rng.fork(static_cast<std::uint64_t>(it));
        std::vector<ComplexMatrix> xs;
        xs.reserve(nf);
        double op_norm_prod = 1.0;
        for (std::size_t f = 0; f < nf; ++f) {
            ComplexMatrix x = random_wishart(sample_rng, dims[f]);
            const EigResult e = hermitian_eig(x);
            op_norm_prod *= e.eigenvalues.empty() ? 0.0 : e.eigenvalues[0];
            xs.push_back(std::move(x));
        }
        std::vector<const ComplexMatrix*> ptrs;
        for (const auto& x : xs) ptrs.push_back(&x);
        const double val = trace_contract(w, dims, ptrs).real();
        const double scale = std::max(op_norm_prod * w_trace_norm, 1e-300);
        report.worst = std::min(report.worst, val);
        report.worst_scaled = std::min(report.worst_scaled, val / scale);
        if (val < -1e-10 * scale)
            report.verdict = TensorPositivity::violated;
    }
    return report;
}

ComplexMatrix flip_operator(int d) {
    if (d < 1) throw Error::validation("flip_operator: d must be >= 1");
    const std::size_t dd = static_cast<std::size_t>(d);
    ComplexMatrix v(dd * dd, dd * dd);
    // V (e_i (x) e_j) = e_j (x) e_i
    for (std::size_t i = 0; i < dd; ++i)
        for (std::size_t j = 0; j < dd; ++j)
            v.at(j * dd + i, i * dd + j) = 1.0;
    return v;
}

ComplexMatrix random_ginibre(Rng& rng, int rows, int cols) {
    ComplexMatrix g(rows, cols);
    for (auto& e : g.data()) e = rng.next_complex_gaussian();
    return g;
}

ComplexMatrix random_hermitian(Rng& rng, int n) {
    ComplexMatrix g = random_ginibre(rng, n, n);
    ComplexMatrix h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            h.at(i, j) = 0.5 * (g.at(i, j) + std::conj(g.at(j, i)));
    return h;
}

ComplexMatrix random_wishart(Rng& rng, int n) {
    ComplexMatrix g = random_ginibre(rng, n, n);
    return matmul(g, g.adjoint());
}

ComplexMatrix random_unitary(Rng& rng, int n) {
    // Modified Gram-Schmidt on a Ginibre matrix; columns are Haar-like.
    ComplexMatrix g = random_ginibre(rng, n, n);
    ComplexMatrix u(n, n);
    std::vector<cd> col(n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) col[i] = g.at(i, j);
        for (int k = 0; k < j; ++k) {
            cd proj = 0.0;
            for (int i = 0; i < n; ++i)
                proj += std::conj(u.at(i, k)) * col[i];
            for (int i = 0; i < n; ++i) col[i] -= proj * u.at(i, k);
        }
        normalize(col);
        for (int i = 0; i < n; ++i) u.at(i, j) = col[i];
    }
    return u;
}

std::vector<cd> random_pure_state(Rng& rng, int dim) {
    std::vector<cd> v(dim);
    for (auto& e : v) e = rng.next_complex_gaussian();
    normalize(v);
    return v;
}

} // namespace bellbound
