#ifndef CBIR_SPECTRAL_HPP
#define CBIR_SPECTRAL_HPP

// Eigenvalue-spectrum signatures. A grayscale image is resized to S x S,
// centred, and turned into its Gram matrix; the cyclic Jacobi method
// diagonalizes that matrix and the leading eigenvalues form the signature.

#include <cstdint>
#include <vector>

#include "cbir/image.hpp"

namespace cbir {

inline constexpr int kDefaultSpectralSide = 64;
inline constexpr int kDefaultSpectralK = 32;
inline constexpr double kDefaultJacobiTol = 1e-10;
inline constexpr int kDefaultJacobiSweeps = 100;

/// Dense n x n matrix, row-major.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(int n);
    SquareMatrix(int n, std::vector<double> entries);

    static SquareMatrix identity(int n);

    [[nodiscard]] int order() const noexcept { return n_; }
    [[nodiscard]] double& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i) * n_ + j]; }
    [[nodiscard]] double operator()(int i, int j) const {
        return entries_[static_cast<std::size_t>(i) * n_ + j];
    }
    [[nodiscard]] const std::vector<double>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::vector<double>& entries() noexcept { return entries_; }

    [[nodiscard]] double trace() const noexcept;
    [[nodiscard]] double frobenius_norm() const noexcept;
    // |m_ij - m_ji| <= 1e-12 * max(1, ||M||_F) for all i, j.
    [[nodiscard]] bool is_symmetric() const noexcept;

    bool operator==(const SquareMatrix&) const = default;

private:
    int n_ = 0;
    std::vector<double> entries_;
};

struct EigenResult {
    std::vector<double> eigenvalues;  // descending
    int iterations = 0;               // completed Jacobi sweeps
};

struct EigenSystem {
    EigenResult values;
    // Column j is the unit eigenvector of values.eigenvalues[j].
    SquareMatrix vectors;
};

struct JacobiOptions {
    double tol = kDefaultJacobiTol;  // relative off-diagonal norm
    int max_sweeps = kDefaultJacobiSweeps;

    bool operator==(const JacobiOptions&) const = default;
};

struct SpectralSignature {
    std::vector<double> values;  // length k, descending, zero-padded past S
    int k = kDefaultSpectralK;
    int side = kDefaultSpectralSide;

    bool operator==(const SpectralSignature&) const = default;
};

// G = A^T A / S where A is the S x S resized image scaled to [0, 1] minus its mean.
[[nodiscard]] SquareMatrix gram_matrix(const RasterImage& gray, int side = kDefaultSpectralSide);

// Throws NotSymmetric or NoConvergence.
[[nodiscard]] EigenResult sym_eigenvalues(const SquareMatrix& m, JacobiOptions opts = {});

// Same rotations with the eigenvectors accumulated.
[[nodiscard]] EigenSystem sym_eigensystem(const SquareMatrix& m, JacobiOptions opts = {});

[[nodiscard]] SpectralSignature spectral_signature(const RasterImage& gray, int side = kDefaultSpectralSide,
                                                   int k = kDefaultSpectralK, JacobiOptions opts = {});

// Euclidean distance; ShapeMismatch unless k and side agree.
[[nodiscard]] double eigen_distance(const SpectralSignature& a, const SpectralSignature& b);

}  // namespace cbir

#endif  // CBIR_SPECTRAL_HPP
