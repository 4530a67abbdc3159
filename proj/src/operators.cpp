#include "lceit/operators.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lceit/errors.hpp"
#include "lceit/simd/kernels.hpp"

namespace lceit {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                             std::to_string(b) + ")");
    }
}

Eigen::MatrixXcd to_eigen(const Operator& op) {
    const auto n = static_cast<Eigen::Index>(op.dim());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = op(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    }
    return m;
}

}  // namespace

Operator::Operator(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

Operator::Operator(std::size_t dim, std::vector<cplx> entries) : dim_(dim), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_) {
        throw DimensionError("Operator: expected " + std::to_string(dim_ * dim_) + " entries, got " +
                             std::to_string(entries_.size()));
    }
}

Operator Operator::identity(std::size_t dim) {
    Operator id(dim);
    for (std::size_t i = 0; i < dim; ++i) id(i, i) = 1.0;
    return id;
}

Operator Operator::adjoint() const {
    Operator out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    }
    return out;
}

Operator Operator::transpose() const {
    Operator out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) out(c, r) = (*this)(r, c);
    }
    return out;
}

cplx Operator::trace() const noexcept {
    cplx t{};
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double Operator::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e));
    return m;
}

double Operator::frobenius_norm() const noexcept {
    double s = 0.0;
    for (const auto& e : entries_) s += std::norm(e);
    return std::sqrt(s);
}

double Operator::hermiticity_defect() const noexcept {
    double m = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = r; c < dim_; ++c) {
            m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        }
    }
    return m;
}

Operator& Operator::operator+=(const Operator& rhs) {
    require_same_dim(dim_, rhs.dim_, "Operator +=");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += rhs.entries_[k];
    return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
    require_same_dim(dim_, rhs.dim_, "Operator -=");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= rhs.entries_[k];
    return *this;
}

Operator& Operator::operator*=(cplx factor) noexcept {
    for (auto& e : entries_) e *= factor;
    return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
    require_same_dim(lhs.dim_, rhs.dim_, "Operator *");
    Operator out(lhs.dim_);
    simd::active_kernels().gemm(lhs.dim_, lhs.data(), rhs.data(), out.data());
    return out;
}

Ket operator*(const Operator& lhs, const Ket& rhs) {
    require_same_dim(lhs.dim(), rhs.dim(), "Operator * Ket");
    Ket out(lhs.dim());
    for (std::size_t r = 0; r < lhs.dim(); ++r) {
        cplx acc{};
        for (std::size_t c = 0; c < lhs.dim(); ++c) acc += lhs(r, c) * rhs[c];
        out[r] = acc;
    }
    return out;
}

Ket Ket::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw DimensionError("Ket::basis: index out of range");
    Ket k(dim);
    k[index] = 1.0;
    return k;
}

double Ket::norm() const noexcept {
    double s = 0.0;
    for (const auto& a : amplitudes_) s += std::norm(a);
    return std::sqrt(s);
}

Ket& Ket::normalize() {
    const double n = norm();
    if (n == 0.0) throw DomainError("Ket::normalize: zero vector");
    for (auto& a : amplitudes_) a /= n;
    return *this;
}

Operator Ket::projector() const {
    Operator p(dim());
    for (std::size_t r = 0; r < dim(); ++r) {
        for (std::size_t c = 0; c < dim(); ++c) p(r, c) = amplitudes_[r] * std::conj(amplitudes_[c]);
    }
    return p;
}

Ket& Ket::operator-=(const Ket& rhs) {
    require_same_dim(dim(), rhs.dim(), "Ket -=");
    for (std::size_t k = 0; k < dim(); ++k) amplitudes_[k] -= rhs.amplitudes_[k];
    return *this;
}

Ket& Ket::operator*=(cplx factor) noexcept {
    for (auto& a : amplitudes_) a *= factor;
    return *this;
}

cplx inner(const Ket& a, const Ket& b) {
    require_same_dim(a.dim(), b.dim(), "inner");
    cplx acc{};
    for (std::size_t k = 0; k < a.dim(); ++k) acc += std::conj(a[k]) * b[k];
    return acc;
}

Ket kron(const Ket& a, const Ket& b) {
    Ket out(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) out[i * b.dim() + j] = a[i] * b[j];
    }
    return out;
}

Operator kron(const Operator& a, const Operator& b) {
    const std::size_t na = a.dim();
    const std::size_t nb = b.dim();
    Operator out(na * nb);
    for (std::size_t ar = 0; ar < na; ++ar) {
        for (std::size_t ac = 0; ac < na; ++ac) {
            const cplx s = a(ar, ac);
            if (s == cplx{}) continue;
            for (std::size_t br = 0; br < nb; ++br) {
                for (std::size_t bc = 0; bc < nb; ++bc) out(ar * nb + br, ac * nb + bc) = s * b(br, bc);
            }
        }
    }
    return out;
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator annihilation(std::size_t ncut) {
    if (ncut < 2) throw DimensionError("annihilation: ncut must be >= 2, got " + std::to_string(ncut));
    Operator b(ncut);
    for (std::size_t n = 1; n < ncut; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
    return b;
}

Operator creation(std::size_t ncut) { return annihilation(ncut).adjoint(); }

Operator number_operator(std::size_t ncut) {
    if (ncut < 2) throw DimensionError("number_operator: ncut must be >= 2");
    Operator n(ncut);
    for (std::size_t k = 0; k < ncut; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

Operator sigma_z() { return Operator(2, {1.0, 0.0, 0.0, -1.0}); }
Operator sigma_x() { return Operator(2, {0.0, 1.0, 1.0, 0.0}); }
Operator sigma_plus() { return Operator(2, {0.0, 1.0, 0.0, 0.0}); }
Operator sigma_minus() { return Operator(2, {0.0, 0.0, 1.0, 0.0}); }
Ket qubit_excited() { return Ket::basis(2, kQubitExcited); }
Ket qubit_ground() { return Ket::basis(2, kQubitGround); }

Ket coherent_ket(cplx alpha, std::size_t ncut) {
    if (ncut < 2) throw DimensionError("coherent_ket: ncut must be >= 2");
    const double mod2 = std::norm(alpha);
    if (mod2 > static_cast<double>(ncut) / 4.0) {
        const auto needed = static_cast<std::size_t>(std::ceil(4.0 * mod2));
        throw DomainError("coherent_ket: |alpha|^2 = " + std::to_string(mod2) + " too large for ncut = " +
                          std::to_string(ncut) + "; need ncut >= " + std::to_string(needed));
    }
    Ket k(ncut);
    if (mod2 == 0.0) {
        k[0] = 1.0;
        return k;
    }
    const double log_mod = std::log(std::abs(alpha));
    const double phase = std::arg(alpha);
    double log_fact = 0.0;  // log(n!)
    for (std::size_t n = 0; n < ncut; ++n) {
        if (n > 0) log_fact += std::log(static_cast<double>(n));
        const double nd = static_cast<double>(n);
        const double log_amp = -0.5 * mod2 + nd * log_mod - 0.5 * log_fact;
        k[n] = std::polar(std::exp(log_amp), nd * phase);
    }
    return k.normalize();
}

std::vector<double> hermitian_eigenvalues(const Operator& op) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(op), Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

DensityMatrix DensityMatrix::thermal_phonons(double n_th, std::size_t ncut) {
    if (n_th < 0.0) throw DomainError("thermal_phonons: n_th must be >= 0");
    if (ncut < 2) throw DimensionError("thermal_phonons: ncut must be >= 2");
    Operator m(ncut);
    if (n_th == 0.0) {
        m(0, 0) = 1.0;
        return DensityMatrix(std::move(m));
    }
    const double ratio = n_th / (n_th + 1.0);
    double weight = 1.0;
    double total = 0.0;
    for (std::size_t n = 0; n < ncut; ++n) {
        m(n, n) = weight;
        total += weight;
        weight *= ratio;
    }
    m *= 1.0 / total;
    return DensityMatrix(std::move(m));
}

double DensityMatrix::purity() const {
    const Operator& m = matrix_;
    double s = 0.0;
    for (const auto& e : m.entries()) s += std::norm(e);  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return s;
}

double DensityMatrix::min_eigenvalue() const {
    // Hermitian part only; the anti-Hermitian remainder is reported separately by check().
    Operator h = matrix_ + matrix_.adjoint();
    h *= 0.5;
    const auto ev = hermitian_eigenvalues(h);
    return ev.empty() ? 0.0 : ev.front();
}

DensityMatrix::Check DensityMatrix::check(double herm_tol, double trace_tol, double eig_tol) const {
    Check c{};
    c.hermiticity_defect = matrix_.hermiticity_defect();
    c.trace_error = std::abs(matrix_.trace() - 1.0);
    c.min_eigenvalue = min_eigenvalue();
    c.ok = c.hermiticity_defect <= herm_tol && c.trace_error <= trace_tol && c.min_eigenvalue >= -eig_tol;
    return c;
}

cplx expectation(const Operator& rho, const Operator& op) {
    require_same_dim(rho.dim(), op.dim(), "expectation");
    // tr(rho op) = sum_ij rho_ij op_ji
    const Operator opt = op.transpose();
    return simd::active_kernels().dotu(rho.size(), rho.data(), opt.data());
}

cplx expectation(const DensityMatrix& rho, const Operator& op) { return expectation(rho.matrix(), op); }

Operator phonon_reduced(const DensityMatrix& rho, std::size_t ncut) {
    if (rho.dim() != 2 * ncut) throw DimensionError("phonon_reduced: rho is not 2 x ncut dimensional");
    Operator out(ncut);
    for (std::size_t q = 0; q < 2; ++q) {
        for (std::size_t n = 0; n < ncut; ++n) {
            for (std::size_t m = 0; m < ncut; ++m) out(n, m) += rho(q * ncut + n, q * ncut + m);
        }
    }
    return out;
}

}  // namespace lceit
