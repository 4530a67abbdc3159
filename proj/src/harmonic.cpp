#include "lceit/harmonic.hpp"

#include <cmath>

#include "lceit/errors.hpp"

namespace lceit {

std::vector<SparseEntry> nonzero_entries(const Operator& op, double tol) {
    std::vector<SparseEntry> out;
    for (std::size_t r = 0; r < op.dim(); ++r) {
        for (std::size_t c = 0; c < op.dim(); ++c) {
            const cplx v = op(r, c);
            if (std::abs(v) > tol) out.push_back({r, c, v});
        }
    }
    return out;
}

HarmonicHamiltonian::HarmonicHamiltonian(Operator static_part) : static_(std::move(static_part)) {}

void HarmonicHamiltonian::add_term(const Operator& op, cplx amplitude, double omega) {
    if (op.dim() != static_.dim()) throw DimensionError("HarmonicHamiltonian::add_term: dimension mismatch");
    if (amplitude == cplx{}) return;
    terms_.push_back({op, amplitude, omega, nonzero_entries(op)});
}

void HarmonicHamiltonian::add_hermitian_pair(const Operator& op, cplx amplitude, double omega) {
    add_term(op, amplitude, omega);
    add_term(op.adjoint(), std::conj(amplitude), -omega);
}

Operator HarmonicHamiltonian::at(double t) const {
    Operator out(dim());
    assemble(t, out);
    return out;
}

void HarmonicHamiltonian::assemble(double t, Operator& out) const {
    std::copy(static_.data(), static_.data() + static_.size(), out.data());
    accumulate_terms(t, out);
}

void HarmonicHamiltonian::accumulate_terms(double t, Operator& out) const {
    for (const auto& term : terms_) {
        const cplx coeff = term.amplitude * std::polar(1.0, term.omega * t);
        for (const auto& e : term.entries) out(e.row, e.col) += coeff * e.value;
    }
}

double HarmonicHamiltonian::max_frequency() const noexcept {
    double m = 0.0;
    for (const auto& term : terms_) m = std::max(m, std::abs(term.omega));
    return m;
}

HarmonicHamiltonian HarmonicHamiltonian::in_frame(const std::vector<double>& energies) const {
    if (energies.size() != dim()) throw DimensionError("HarmonicHamiltonian::in_frame: energy list size mismatch");

    struct Bucket {
        double omega;
        Operator op;
    };
    std::vector<Bucket> buckets;
    Operator new_static(dim());
    const auto same = [](double a, double b) { return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a) + std::abs(b)); };
    auto place = [&](std::size_t r, std::size_t c, cplx value, double omega) {
        if (same(omega, 0.0)) {
            new_static(r, c) += value;
            return;
        }
        for (auto& b : buckets) {
            if (same(b.omega, omega)) {
                b.op(r, c) += value;
                return;
            }
        }
        Bucket b{omega, Operator(dim())};
        b.op(r, c) = value;
        buckets.push_back(std::move(b));
    };

    for (std::size_t r = 0; r < dim(); ++r) {
        for (std::size_t c = 0; c < dim(); ++c) {
            cplx v = static_(r, c);
            if (r == c) v -= energies[r];
            if (v != cplx{}) place(r, c, v, energies[r] - energies[c]);
        }
    }
    for (const auto& term : terms_) {
        for (const auto& e : term.entries) {
            place(e.row, e.col, term.amplitude * e.value, term.omega + energies[e.row] - energies[e.col]);
        }
    }

    HarmonicHamiltonian out(std::move(new_static));
    for (auto& b : buckets) out.add_term(b.op, 1.0, b.omega);
    return out;
}

void InteractionFrame::rotate(const Operator& in, double t, double sign, Operator& out) const {
    const std::size_t n = in.dim();
    if (energies_.empty()) {
        if (&out != &in) out = in;
        return;
    }
    if (energies_.size() != n) throw DimensionError("InteractionFrame: dimension mismatch");
    thread_local std::vector<cplx> phase;
    phase.resize(n);
    for (std::size_t k = 0; k < n; ++k) phase[k] = std::polar(1.0, sign * energies_[k] * t);
    if (out.dim() != n) out = Operator(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) out(r, c) = in(r, c) * phase[r] * std::conj(phase[c]);
    }
}

Operator InteractionFrame::to_lab(const Operator& rho_frame, double t) const {
    Operator out(rho_frame.dim());
    rotate(rho_frame, t, -1.0, out);
    return out;
}

void InteractionFrame::to_lab(const Operator& rho_frame, double t, Operator& out) const {
    rotate(rho_frame, t, -1.0, out);
}

Operator InteractionFrame::from_lab(const Operator& rho_lab, double t) const {
    Operator out(rho_lab.dim());
    rotate(rho_lab, t, +1.0, out);
    return out;
}

}  // namespace lceit
