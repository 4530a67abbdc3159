#pragma once

// Time-dependent Hamiltonians made of a static part plus harmonic terms
// amplitude * exp(i omega t) * op, and interaction frames generated by a
// diagonal reference Hamiltonian.
//
// Frequencies here are angular (rad/us) and times are in us.

#include <cstddef>
#include <vector>

#include "lceit/operators.hpp"

namespace lceit {

struct SparseEntry {
    std::size_t row;
    std::size_t col;
    cplx value;
};

std::vector<SparseEntry> nonzero_entries(const Operator& op, double tol = 0.0);

struct HarmonicTerm {
    Operator op;
    cplx amplitude;
    double omega;
    std::vector<SparseEntry> entries;  // nonzeros of op
};

class HarmonicHamiltonian {
public:
    HarmonicHamiltonian() = default;
    explicit HarmonicHamiltonian(Operator static_part);

    /// Adds amplitude * exp(i omega t) * op.
    void add_term(const Operator& op, cplx amplitude, double omega);
    /// Adds amplitude * exp(i omega t) * op + h.c.
    void add_hermitian_pair(const Operator& op, cplx amplitude, double omega);

    [[nodiscard]] std::size_t dim() const noexcept { return static_.dim(); }
    [[nodiscard]] const Operator& static_part() const noexcept { return static_; }
    [[nodiscard]] const std::vector<HarmonicTerm>& terms() const noexcept { return terms_; }

    [[nodiscard]] Operator at(double t) const;
    /// out = static part + sum of terms at t. out must already have dim().
    void assemble(double t, Operator& out) const;
    /// Adds only the harmonic terms at t into out.
    void accumulate_terms(double t, Operator& out) const;

    /// Largest |omega| over the harmonic terms (0 for a static Hamiltonian).
    [[nodiscard]] double max_frequency() const noexcept;

    /// exp(i H0 t) (H(t) - H0) exp(-i H0 t) for H0 = diag(energies). Entries of
    /// each term are regrouped by their total frequency.
    [[nodiscard]] HarmonicHamiltonian in_frame(const std::vector<double>& energies) const;

private:
    Operator static_;
    std::vector<HarmonicTerm> terms_;
};

/// Interaction frame of a diagonal reference Hamiltonian. An empty energy list is
/// the identity frame.
class InteractionFrame {
public:
    InteractionFrame() = default;
    explicit InteractionFrame(std::vector<double> energies) : energies_(std::move(energies)) {}

    [[nodiscard]] bool is_identity() const noexcept { return energies_.empty(); }
    [[nodiscard]] const std::vector<double>& energies() const noexcept { return energies_; }

    /// rho_lab = exp(-i H0 t) rho_frame exp(i H0 t)
    [[nodiscard]] Operator to_lab(const Operator& rho_frame, double t) const;
    void to_lab(const Operator& rho_frame, double t, Operator& out) const;
    /// rho_frame = exp(i H0 t) rho_lab exp(-i H0 t)
    [[nodiscard]] Operator from_lab(const Operator& rho_lab, double t) const;

private:
    void rotate(const Operator& in, double t, double sign, Operator& out) const;

    std::vector<double> energies_;
};

}  // namespace lceit
