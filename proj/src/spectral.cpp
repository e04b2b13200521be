#include "cbir/spectral.hpp"

#include <cstdint>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "cbir/error.hpp"
#include "cbir/kernels.hpp"

namespace cbir {

SquareMatrix::SquareMatrix(int n) : SquareMatrix(n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)) {}

SquareMatrix::SquareMatrix(int n, std::vector<double> entries) : n_(n), entries_(std::move(entries)) {
    if (n < 1) throw Error(ErrorCode::ZeroDimension, "matrix order must be >= 1");
    if (entries_.size() != static_cast<std::size_t>(n) * n) {
        throw Error(ErrorCode::ShapeMismatch, "matrix of order " + std::to_string(n) + " given " +
                                                  std::to_string(entries_.size()) + " entries");
    }
}

SquareMatrix SquareMatrix::identity(int n) {
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double SquareMatrix::trace() const noexcept {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double SquareMatrix::frobenius_norm() const noexcept {
    double s = 0.0;
    for (double v : entries_) s += v * v;
    return std::sqrt(s);
}

bool SquareMatrix::is_symmetric() const noexcept {
    const double bound = 1e-12 * std::max(1.0, frobenius_norm());
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (std::fabs((*this)(i, j) - (*this)(j, i)) > bound) return false;
    return true;
}

namespace {

double off_diagonal_norm(const SquareMatrix& a) {
    double s = 0.0;
    const int n = a.order();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

// Cyclic Jacobi. Each rotation zeroes a(p, q) with an orthogonal similarity,
// so trace and Frobenius norm are preserved up to rounding.
EigenSystem jacobi(const SquareMatrix& m, JacobiOptions opts, bool want_vectors) {
    if (!(opts.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "jacobi tolerance must be > 0");
    if (opts.max_sweeps < 0) throw Error(ErrorCode::InvalidArgument, "max_sweeps must be >= 0");
    if (!m.is_symmetric()) throw Error(ErrorCode::NotSymmetric, "matrix of order " + std::to_string(m.order()));

    const int n = m.order();
    SquareMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
    SquareMatrix v = want_vectors ? SquareMatrix::identity(n) : SquareMatrix{};

    const double threshold = opts.tol * a.frobenius_norm();
    int sweeps = 0;
    double off = off_diagonal_norm(a);
    while (off > threshold) {
        if (sweeps == opts.max_sweeps) {
            throw Error(ErrorCode::NoConvergence, "off-diagonal norm " + std::to_string(off) + " after " +
                                                      std::to_string(sweeps) + " sweeps");
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::fabs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = a(p, k) = c * akp - s * akq;
                    a(k, q) = a(q, k) = s * akp + c * akq;
                }
                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = a(q, p) = 0.0;

                if (want_vectors) {
                    for (int k = 0; k < n; ++k) {
                        const double vkp = v(k, p);
                        const double vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
        ++sweeps;
        off = off_diagonal_norm(a);
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });

    EigenSystem out;
    out.values.iterations = sweeps;
    out.values.eigenvalues.reserve(static_cast<std::size_t>(n));
    for (int i : order) out.values.eigenvalues.push_back(a(i, i));
    if (want_vectors) {
        out.vectors = SquareMatrix(n);
        for (int col = 0; col < n; ++col)
            for (int k = 0; k < n; ++k) out.vectors(k, col) = v(k, order[static_cast<std::size_t>(col)]);
    }
    return out;
}

}  // namespace

SquareMatrix gram_matrix(const RasterImage& gray, int side) {
    if (side < 1) throw Error(ErrorCode::ZeroDimension, "spectral side must be >= 1");
    if (gray.format() != PixelFormat::GRAY8) throw Error(ErrorCode::InvalidArgument, "gram_matrix needs GRAY8");
    const RasterImage resized = resize_bilinear(gray, side, side);

    // Centre in integer units so that constant images give an exact zero.
    const auto px = resized.pixels();
    const auto n = static_cast<std::int64_t>(px.size());
    std::int64_t sum = 0;
    for (auto v : px) sum += v;
    const double scale = 255.0 * static_cast<double>(n);
    std::vector<double> centred(px.size());
    for (std::size_t i = 0; i < px.size(); ++i) {
        centred[i] = static_cast<double>(static_cast<std::int64_t>(px[i]) * n - sum) / scale;
    }

    SquareMatrix g(side);
    kernels::omp::gram(centred, side, g.entries());
    return g;
}

EigenResult sym_eigenvalues(const SquareMatrix& m, JacobiOptions opts) {
    return jacobi(m, opts, false).values;
}

EigenSystem sym_eigensystem(const SquareMatrix& m, JacobiOptions opts) { return jacobi(m, opts, true); }

SpectralSignature spectral_signature(const RasterImage& gray, int side, int k, JacobiOptions opts) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "signature length k must be >= 1");
    const EigenResult eig = sym_eigenvalues(gram_matrix(gray, side), opts);

    SpectralSignature sig;
    sig.k = k;
    sig.side = side;
    sig.values.assign(static_cast<std::size_t>(k), 0.0);
    const std::size_t keep = std::min(eig.eigenvalues.size(), sig.values.size());
    std::copy_n(eig.eigenvalues.begin(), keep, sig.values.begin());
    return sig;
}

double eigen_distance(const SpectralSignature& a, const SpectralSignature& b) {
    if (a.k != b.k || a.side != b.side || a.values.size() != b.values.size()) {
        throw Error(ErrorCode::ShapeMismatch, "signatures (k=" + std::to_string(a.k) + ", S=" +
                                                  std::to_string(a.side) + ") vs (k=" + std::to_string(b.k) +
                                                  ", S=" + std::to_string(b.side) + ")");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace cbir
