#pragma once

// Dense operators on the qubit (x) Fock product space.
//
// Basis convention: the qubit factor comes first and is ordered (|e>, |g>), so
// sigma_z = diag(+1, -1) = |e><e| - |g><g|. A product-space basis index is
// q * ncut + n with q = 0 for |e> and q = 1 for |g>.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lceit {

using cplx = std::complex<double>;

inline constexpr std::size_t kQubitExcited = 0;
inline constexpr std::size_t kQubitGround = 1;

class Ket;

/// Dense complex square matrix stored row-major.
class Operator {
public:
    Operator() = default;
    explicit Operator(std::size_t dim);
    Operator(std::size_t dim, std::vector<cplx> entries);

    static Operator identity(std::size_t dim);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }

    cplx& operator()(std::size_t row, std::size_t col) noexcept { return entries_[row * dim_ + col]; }
    const cplx& operator()(std::size_t row, std::size_t col) const noexcept { return entries_[row * dim_ + col]; }

    [[nodiscard]] cplx* data() noexcept { return entries_.data(); }
    [[nodiscard]] const cplx* data() const noexcept { return entries_.data(); }
    [[nodiscard]] std::span<const cplx> entries() const noexcept { return entries_; }

    [[nodiscard]] Operator adjoint() const;
    [[nodiscard]] Operator transpose() const;
    [[nodiscard]] cplx trace() const noexcept;

    /// Largest |entry|.
    [[nodiscard]] double max_abs() const noexcept;
    [[nodiscard]] double frobenius_norm() const noexcept;
    /// max |A - A^dagger| over entries.
    [[nodiscard]] double hermiticity_defect() const noexcept;
    [[nodiscard]] bool is_hermitian(double tol) const noexcept { return hermiticity_defect() <= tol; }

    Operator& operator+=(const Operator& rhs);
    Operator& operator-=(const Operator& rhs);
    Operator& operator*=(cplx factor) noexcept;

    friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
    friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
    friend Operator operator*(Operator lhs, cplx factor) { return lhs *= factor; }
    friend Operator operator*(cplx factor, Operator rhs) { return rhs *= factor; }
    friend Operator operator*(const Operator& lhs, const Operator& rhs);
    friend Ket operator*(const Operator& lhs, const Ket& rhs);

    friend bool operator==(const Operator&, const Operator&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<cplx> entries_;
};

class Ket {
public:
    Ket() = default;
    explicit Ket(std::size_t dim) : amplitudes_(dim) {}
    explicit Ket(std::vector<cplx> amplitudes) : amplitudes_(std::move(amplitudes)) {}

    /// Basis vector |index>.
    static Ket basis(std::size_t dim, std::size_t index);

    [[nodiscard]] std::size_t dim() const noexcept { return amplitudes_.size(); }
    cplx& operator[](std::size_t i) noexcept { return amplitudes_[i]; }
    const cplx& operator[](std::size_t i) const noexcept { return amplitudes_[i]; }
    [[nodiscard]] std::span<const cplx> amplitudes() const noexcept { return amplitudes_; }

    [[nodiscard]] double norm() const noexcept;
    Ket& normalize();

    /// |psi><psi|
    [[nodiscard]] Operator projector() const;

    Ket& operator-=(const Ket& rhs);
    Ket& operator*=(cplx factor) noexcept;
    friend Ket operator-(Ket lhs, const Ket& rhs) { return lhs -= rhs; }
    friend Ket operator*(cplx factor, Ket rhs) { return rhs *= factor; }

private:
    std::vector<cplx> amplitudes_;
};

/// <a|b>
cplx inner(const Ket& a, const Ket& b);
Ket kron(const Ket& a, const Ket& b);

/// Kronecker product; the first factor indexes the outer (slow) block.
Operator kron(const Operator& a, const Operator& b);
Operator commutator(const Operator& a, const Operator& b);

/// Truncated phonon annihilation operator, entries (n-1, n) = sqrt(n).
Operator annihilation(std::size_t ncut);
Operator creation(std::size_t ncut);
Operator number_operator(std::size_t ncut);

Operator sigma_z();
Operator sigma_x();
Operator sigma_plus();   // |e><g|
Operator sigma_minus();  // |g><e|
Ket qubit_excited();
Ket qubit_ground();

/// |alpha> truncated to ncut levels and renormalised. Requires |alpha|^2 <= ncut / 4.
Ket coherent_ket(cplx alpha, std::size_t ncut);

/// Eigenvalues of a Hermitian operator in ascending order.
std::vector<double> hermitian_eigenvalues(const Operator& op);

class DensityMatrix {
public:
    DensityMatrix() = default;
    explicit DensityMatrix(Operator matrix) : matrix_(std::move(matrix)) {}

    static DensityMatrix pure(const Ket& psi) { return DensityMatrix(psi.projector()); }
    /// Thermal phonon state with mean occupation n_th, truncated and renormalised.
    static DensityMatrix thermal_phonons(double n_th, std::size_t ncut);

    [[nodiscard]] std::size_t dim() const noexcept { return matrix_.dim(); }
    [[nodiscard]] const Operator& matrix() const noexcept { return matrix_; }
    [[nodiscard]] Operator& matrix() noexcept { return matrix_; }
    cplx operator()(std::size_t r, std::size_t c) const noexcept { return matrix_(r, c); }

    [[nodiscard]] cplx trace() const noexcept { return matrix_.trace(); }
    [[nodiscard]] double purity() const;
    [[nodiscard]] double min_eigenvalue() const;

    struct Check {
        double hermiticity_defect;
        double trace_error;
        double min_eigenvalue;
        bool ok;
    };
    /// On-demand invariant check (Hermitian 1e-10, trace 1e-8, eigenvalues >= -1e-8 by default).
    [[nodiscard]] Check check(double herm_tol = 1e-10, double trace_tol = 1e-8, double eig_tol = 1e-8) const;

private:
    Operator matrix_;
};

/// tr(rho * op)
cplx expectation(const DensityMatrix& rho, const Operator& op);
cplx expectation(const Operator& rho, const Operator& op);

/// Reduced density matrix of the phonon factor (trace over the qubit).
Operator phonon_reduced(const DensityMatrix& rho, std::size_t ncut);

}  // namespace lceit
