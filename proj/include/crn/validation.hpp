#pragma once

#include "crn/kinetics.hpp"
#include "crn/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <vector>

namespace crn {

// Dense |E| x |M| derivative matrix from canonical symbol values.
inline DenseMatrix rbar_from_symbols(const ReactionNetwork& net, const SymbolTable& table,
                                     const std::vector<double>& canonical_values) {
    DenseMatrix r = DenseMatrix::Zero(static_cast<Eigen::Index>(net.num_reactions()),
                                      static_cast<Eigen::Index>(net.num_species()));
    for (const auto& s : table.raw_symbols())
        r(static_cast<Eigen::Index>(s.reaction), static_cast<Eigen::Index>(s.species)) =
            canonical_values.at(s.canonical);
    return r;
}

// Random log-uniform derivative matrix on the reactant support.
inline DenseMatrix random_rbar(const ReactionNetwork& net, std::mt19937_64& rng, double lo = 0.1, double hi = 10.0) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    DenseMatrix r = DenseMatrix::Zero(static_cast<Eigen::Index>(net.num_reactions()),
                                      static_cast<Eigen::Index>(net.num_species()));
    for (const auto& rx : net.reactions)
        for (auto [m, c] : rx.reactants)
            if (c > 0) r(static_cast<Eigen::Index>(rx.id), static_cast<Eigen::Index>(m)) = std::exp(u(rng));
    return r;
}

inline DenseMatrix symbolic_jacobian_value(const ReactionNetwork& net, const DenseMatrix& rbar) {
    return stoichiometric_dense(net) * rbar;
}

struct RealizationCheck {
    double flux_error = 0.0;      // max_j |r_j(xbar) - v_j| / v_j
    double jacobian_error = 0.0;  // max |J_fd - S Rbar| / max |S Rbar|
    DenseMatrix jacobian;
};

inline RealizationCheck check_realization(const KineticModel& model, const std::vector<double>& xbar,
                                          const DenseMatrix& rbar, const std::vector<double>& v) {
    RealizationCheck c;
    const auto r = model.rates(xbar);
    for (std::size_t j = 0; j < r.size(); ++j) c.flux_error = std::max(c.flux_error, std::fabs(r[j] - v[j]) / v[j]);
    c.jacobian = numeric_jacobian(model, xbar);
    const DenseMatrix g = symbolic_jacobian_value(model.network, rbar);
    const double scale = g.cwiseAbs().maxCoeff();
    c.jacobian_error = scale > 0 ? (c.jacobian - g).cwiseAbs().maxCoeff() / scale : (c.jacobian).cwiseAbs().maxCoeff();
    return c;
}

struct WitnessValidation {
    bool performed = false;
    double flux_error = 0.0;
    double jacobian_error = 0.0;
    double min_abs_eigenvalue = 0.0;
    double reduced_determinant = 0.0;
    std::vector<std::complex<double>> reduced_spectrum;
    bool zero_eigenvalue = false;
};

constexpr double kZeroEigenvalueTolerance = 1e-6;

// Realizes generalized mass-action kinetics at xbar = 1 with the witness
// derivatives and a symmetric positive flux, then inspects the Jacobian
// reduced to the stoichiometric compatibility class.
inline WitnessValidation validate_witness(const ReactionNetwork& net, const CapacityVerdict& verdict) {
    WitnessValidation w;
    if (!verdict.witness || !verdict.flux) return w;
    w.performed = true;
    const std::vector<double> xbar(net.num_species(), 1.0);
    const std::vector<double> v = to_doubles(symmetrized_flux(net, *verdict.flux));
    const DenseMatrix rbar = rbar_from_symbols(net, verdict.charpoly.symbols, *verdict.witness);
    const KineticModel model = realize_parameters(net, xbar, rbar, v);
    const RealizationCheck check = check_realization(model, xbar, rbar, v);
    w.flux_error = check.flux_error;
    w.jacobian_error = check.jacobian_error;
    const DenseMatrix q = image_basis(net, net.num_species() - verdict.conservation_dim);
    const DenseMatrix red = reduced_jacobian(check.jacobian, q);
    w.reduced_spectrum = eigenvalues(red);
    w.reduced_determinant = red.rows() ? red.determinant() : 1.0;
    w.min_abs_eigenvalue = std::numeric_limits<double>::infinity();
    for (auto e : w.reduced_spectrum) w.min_abs_eigenvalue = std::min(w.min_abs_eigenvalue, std::abs(e));
    w.zero_eigenvalue = w.min_abs_eigenvalue < kZeroEigenvalueTolerance;
    return w;
}

struct SegmentPoint {
    double s = 0.0;
    double reduced_determinant = 0.0;
    double leading_real = 0.0;
    Stability stability = Stability::Marginal;
};

// Realized models along the segment between the two signed endpoints used by
// the witness search; the witness itself lies on this segment.
inline std::vector<SegmentPoint> witness_segment(const ReactionNetwork& net, const CapacityVerdict& verdict,
                                                 const std::vector<double>& grid) {
    std::vector<SegmentPoint> out;
    if (!verdict.witness_endpoints || !verdict.flux) return out;
    const auto& [p, q] = *verdict.witness_endpoints;
    const std::vector<double> xbar(net.num_species(), 1.0);
    const std::vector<double> v = to_doubles(symmetrized_flux(net, *verdict.flux));
    const DenseMatrix basis = image_basis(net, net.num_species() - verdict.conservation_dim);
    for (double s : grid) {
        std::vector<double> vals(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) vals[i] = (1 - s) * p[i] + s * q[i];
        const DenseMatrix rbar = rbar_from_symbols(net, verdict.charpoly.symbols, vals);
        const KineticModel model = realize_parameters(net, xbar, rbar, v);
        const DenseMatrix red = reduced_jacobian(numeric_jacobian(model, xbar), basis);
        const auto ev = eigenvalues(red);
        SegmentPoint pt;
        pt.s = s;
        pt.reduced_determinant = red.rows() ? red.determinant() : 1.0;
        pt.leading_real = ev.empty() ? 0.0 : ev.front().real();
        pt.stability = classify_spectrum(ev);
        out.push_back(pt);
    }
    return out;
}

}  // namespace crn
