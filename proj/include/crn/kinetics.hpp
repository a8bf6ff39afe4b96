#pragma once

#include "crn/linalg.hpp"
#include "crn/network.hpp"
#include "crn/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace crn {

enum class LawKind { MassAction, GeneralizedMassAction, MichaelisMenten, Hill, ExplicitMI };

inline std::string to_string(LawKind k) {
    switch (k) {
        case LawKind::MassAction: return "mass_action";
        case LawKind::GeneralizedMassAction: return "gma";
        case LawKind::MichaelisMenten: return "mm";
        case LawKind::Hill: return "hill";
        case LawKind::ExplicitMI: return "explicit_mi";
    }
    return "unknown";
}

// Rate law of one reaction. Per-reactant parameters are keyed by species id;
// missing exponents default to the stoichiometric coefficient, missing
// saturation constants to 0, missing Hill coefficients to 1 and Hill
// constants to 1.
struct RateLaw {
    LawKind kind = LawKind::MassAction;
    double k = 1.0;
    std::map<std::size_t, double> exponent;
    std::map<std::size_t, double> saturation;
    std::map<std::size_t, double> hill_n;
    std::map<std::size_t, double> hill_K;
    double beta = 0.0;

    bool operator==(const RateLaw&) const = default;
};

namespace detail {

inline double lookup(const std::map<std::size_t, double>& m, std::size_t key, double fallback) {
    auto it = m.find(key);
    return it == m.end() ? fallback : it->second;
}

}  // namespace detail

inline double rate_value(const Reaction& r, const RateLaw& law, const std::vector<double>& x) {
    double v = law.k;
    for (auto [m, s] : r.reactants) {
        const double xm = x.at(m);
        switch (law.kind) {
            case LawKind::MassAction: v *= std::pow(xm, s); break;
            case LawKind::GeneralizedMassAction: v *= std::pow(xm, detail::lookup(law.exponent, m, s)); break;
            case LawKind::MichaelisMenten: {
                const double a = detail::lookup(law.saturation, m, 0.0);
                v *= std::pow(xm / (1.0 + a * xm), s);
                break;
            }
            case LawKind::Hill: {
                const double n = detail::lookup(law.hill_n, m, 1.0);
                const double kk = detail::lookup(law.hill_K, m, 1.0);
                const double xn = std::pow(xm, n);
                v *= std::pow(xn / (std::pow(kk, n) + xn), s);
                break;
            }
            case LawKind::ExplicitMI:
                v *= s >= 2 ? std::pow(xm / (1.0 + law.beta * xm), s) : std::pow(xm, s);
                break;
        }
    }
    return v;
}

struct KineticModel {
    ReactionNetwork network;
    std::vector<RateLaw> laws;
    bool kinetic_symmetry = false;

    std::vector<double> rates(const std::vector<double>& x) const {
        if (x.size() != network.num_species()) throw std::invalid_argument("state has wrong dimension");
        for (double v : x)
            if (v < 0 || std::isnan(v)) throw std::domain_error("negative concentration");
        std::vector<double> r(network.num_reactions());
        for (const auto& rx : network.reactions) r[rx.id] = rate_value(rx, laws.at(rx.id), x);
        return r;
    }

    std::vector<double> rhs(const std::vector<double>& x) const {
        const auto r = rates(x);
        std::vector<double> f(network.num_species(), 0.0);
        for (const auto& rx : network.reactions) {
            for (auto [m, c] : rx.products) f[m] += c * r[rx.id];
            for (auto [m, c] : rx.reactants) f[m] -= c * r[rx.id];
        }
        return f;
    }

    // Checks that sigma-paired reactions carry identical laws after mapping
    // species-keyed parameters through the involution.
    bool symmetric_laws() const {
        if (!network.symmetry) return false;
        const auto& sym = *network.symmetry;
        auto mapped = [&](const std::map<std::size_t, double>& m) {
            std::map<std::size_t, double> out;
            for (auto [k, v] : m) out[sym.species_perm[k]] = v;
            return out;
        };
        for (const auto& rx : network.reactions) {
            const RateLaw& a = laws[rx.id];
            const RateLaw& b = laws[sym.reaction_perm[rx.id]];
            if (a.kind != b.kind || a.k != b.k || a.beta != b.beta) return false;
            if (mapped(a.exponent) != b.exponent || mapped(a.saturation) != b.saturation ||
                mapped(a.hill_n) != b.hill_n || mapped(a.hill_K) != b.hill_K)
                return false;
        }
        return true;
    }
};

inline std::vector<double> evaluate_rates(const KineticModel& model, const std::vector<double>& x) {
    return model.rates(x);
}

inline KineticModel uniform_model(const ReactionNetwork& net, const RateLaw& law) {
    KineticModel m{net, std::vector<RateLaw>(net.num_reactions(), law), false};
    return m;
}

inline std::vector<double> to_doubles(const RationalVector& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& q : v) out.push_back(q.convert_to<double>());
    return out;
}

// Flux vector made invariant under the network symmetry (v + P v), so that a
// realized model keeps kinetic symmetry.
inline RationalVector symmetrized_flux(const ReactionNetwork& net, const RationalVector& v) {
    if (!net.symmetry) return v;
    RationalVector out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) out[j] = v[j] + v[net.symmetry->reaction_perm[j]];
    return out;
}

using DenseMatrix = Eigen::MatrixXd;

// Generalized mass-action model with steady state xbar, flux v and
// derivatives dr_j/dx_m (xbar) = rbar(j, m).
inline KineticModel realize_parameters(const ReactionNetwork& net, const std::vector<double>& xbar,
                                       const DenseMatrix& rbar, const std::vector<double>& v) {
    const std::size_t nm = net.num_species(), ne = net.num_reactions();
    if (xbar.size() != nm || v.size() != ne || static_cast<std::size_t>(rbar.rows()) != ne ||
        static_cast<std::size_t>(rbar.cols()) != nm)
        throw std::invalid_argument("realize_parameters: dimension mismatch");
    for (double x : xbar)
        if (!(x > 0)) throw std::invalid_argument("realize_parameters: steady state must be positive");
    for (double f : v)
        if (!(f > 0)) throw std::invalid_argument("realize_parameters: flux must be positive");
    KineticModel model{net, std::vector<RateLaw>(ne), false};
    for (const auto& rx : net.reactions) {
        for (std::size_t m = 0; m < nm; ++m) {
            const bool reactant = rx.reactant_coeff(m) > 0;
            const double val = rbar(static_cast<Eigen::Index>(rx.id), static_cast<Eigen::Index>(m));
            if (reactant != (val != 0.0))
                throw std::invalid_argument("realize_parameters: derivative support differs from reactant pattern");
        }
        RateLaw law;
        law.kind = LawKind::GeneralizedMassAction;
        double denom = 1.0;
        for (auto [m, c] : rx.reactants) {
            const double e = rbar(static_cast<Eigen::Index>(rx.id), static_cast<Eigen::Index>(m)) * xbar[m] / v[rx.id];
            if (!(e > 0)) throw std::invalid_argument("realize_parameters: nonpositive exponent");
            law.exponent[m] = e;
            denom *= std::pow(xbar[m], e);
        }
        law.k = v[rx.id] / denom;
        model.laws[rx.id] = law;
    }
    model.kinetic_symmetry = net.symmetry.has_value() && model.symmetric_laws();
    return model;
}

inline DenseMatrix stoichiometric_dense(const ReactionNetwork& net) {
    const auto s = stoichiometric_ints(net);
    DenseMatrix d(static_cast<Eigen::Index>(net.num_species()), static_cast<Eigen::Index>(net.num_reactions()));
    for (std::size_t m = 0; m < net.num_species(); ++m)
        for (std::size_t j = 0; j < net.num_reactions(); ++j)
            d(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) = s[m][j];
    return d;
}

// d r_j / d x_m by central differences, one-sided near the boundary.
inline DenseMatrix numeric_rate_derivatives(const KineticModel& model, const std::vector<double>& x) {
    const std::size_t nm = model.network.num_species(), ne = model.network.num_reactions();
    DenseMatrix d(static_cast<Eigen::Index>(ne), static_cast<Eigen::Index>(nm));
    const double eps = std::sqrt(std::numeric_limits<double>::epsilon());
    for (std::size_t m = 0; m < nm; ++m) {
        const double h = eps * (1.0 + std::fabs(x[m]));
        std::vector<double> up = x, down = x;
        up[m] += h;
        double width = 2 * h;
        if (x[m] - h < 0) {
            down[m] = x[m];
            width = h;
        } else {
            down[m] -= h;
        }
        const auto ru = model.rates(up), rd = model.rates(down);
        for (std::size_t j = 0; j < ne; ++j)
            d(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m)) = (ru[j] - rd[j]) / width;
    }
    return d;
}

inline DenseMatrix numeric_jacobian(const KineticModel& model, const std::vector<double>& x) {
    return stoichiometric_dense(model.network) * numeric_rate_derivatives(model, x);
}

// Orthonormal basis of Im S with the given rank (taken from exact arithmetic).
inline DenseMatrix image_basis(const ReactionNetwork& net, std::size_t rank_s) {
    const DenseMatrix s = stoichiometric_dense(net);
    if (rank_s == 0 || s.size() == 0) return DenseMatrix(s.rows(), 0);
    Eigen::JacobiSVD<DenseMatrix> svd(s, Eigen::ComputeFullU);
    return svd.matrixU().leftCols(static_cast<Eigen::Index>(rank_s));
}

inline DenseMatrix reduced_jacobian(const DenseMatrix& jac, const DenseMatrix& q) { return q.transpose() * jac * q; }

inline std::vector<std::complex<double>> eigenvalues(const DenseMatrix& m) {
    std::vector<std::complex<double>> out;
    if (m.rows() == 0) return out;
    Eigen::EigenSolver<DenseMatrix> es(m, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i]);
    std::sort(out.begin(), out.end(), [](auto a, auto b) {
        return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
    });
    return out;
}

enum class Stability { Stable, Unstable, Marginal };

inline std::string to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Unstable: return "unstable";
        case Stability::Marginal: return "marginal";
    }
    return "unknown";
}

constexpr double kStabilityBand = 1e-9;

inline Stability classify_spectrum(const std::vector<std::complex<double>>& ev, double band = kStabilityBand) {
    double mx = -std::numeric_limits<double>::infinity();
    for (auto e : ev) mx = std::max(mx, e.real());
    if (ev.empty() || mx < -band) return Stability::Stable;
    if (mx > band) return Stability::Unstable;
    return Stability::Marginal;
}

struct SimulationOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double initial_step = 0.0;
    std::size_t max_steps = 1000000;
    std::vector<double> output_times;  // empty: every accepted step
};

struct IntegratorStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evaluations = 0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    IntegratorStats stats;
    bool ok = true;
    std::string message;
};

// Dormand-Prince 5(4) with the standard continuous extension.
inline Trajectory simulate(const KineticModel& model, const std::vector<double>& x0, double t_end,
                           const SimulationOptions& opts = {}) {
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                     a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    Trajectory tr;
    const std::size_t n = x0.size();
    for (double v : x0)
        if (!(v >= 0)) throw std::invalid_argument("simulate: initial state must be nonnegative");
    if (n != model.network.num_species()) throw std::invalid_argument("simulate: initial state has wrong dimension");
    std::vector<double> outputs = opts.output_times;
    std::sort(outputs.begin(), outputs.end());
    std::size_t next_out = 0;
    auto emit = [&](double t, const std::vector<double>& x) {
        tr.times.push_back(t);
        tr.states.push_back(x);
    };
    while (next_out < outputs.size() && outputs[next_out] <= 0.0) emit(outputs[next_out++], x0);
    if (outputs.empty()) emit(0.0, x0);

    auto f = [&](const std::vector<double>& x) {
        ++tr.stats.rhs_evaluations;
        return model.rhs(x);
    };
    auto nonneg = [](const std::vector<double>& x) {
        for (double v : x)
            if (!(v >= 0)) return false;
        return true;
    };
    auto combo = [&](const std::vector<double>& y, double h, std::initializer_list<std::pair<double, const std::vector<double>*>> terms) {
        std::vector<double> out = y;
        for (auto [c, k] : terms)
            if (c != 0.0)
                for (std::size_t i = 0; i < n; ++i) out[i] += h * c * (*k)[i];
        return out;
    };

    double t = 0.0;
    std::vector<double> y = x0;
    std::vector<double> k1 = f(y);
    double h = opts.initial_step;
    if (h <= 0) {
        double nrm = 0, fn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = opts.atol + opts.rtol * std::fabs(y[i]);
            nrm = std::max(nrm, std::fabs(y[i]) / sc);
            fn = std::max(fn, std::fabs(k1[i]) / sc);
        }
        h = (nrm < 1e-5 || fn < 1e-5) ? 1e-6 : 0.01 * nrm / fn;
        h = std::min(h, t_end);
    }
    std::size_t steps = 0;
    while (t < t_end) {
        if (++steps > opts.max_steps) {
            tr.ok = false;
            tr.message = "maximum number of steps exceeded";
            break;
        }
        if (t + h > t_end) h = t_end - t;
        if (h < 1e-14 * std::max(1.0, std::fabs(t))) {
            tr.ok = false;
            tr.message = "step size underflow at t=" + std::to_string(t);
            break;
        }
        bool negative = false;
        auto stage = [&](const std::vector<double>& yy) -> std::vector<double> {
            if (!nonneg(yy)) {
                negative = true;
                return std::vector<double>(n, 0.0);
            }
            return f(yy);
        };
        const auto y2 = combo(y, h, {{a21, &k1}});
        const auto k2 = stage(y2);
        const auto k3 = negative ? k2 : stage(combo(y, h, {{a31, &k1}, {a32, &k2}}));
        const auto k4 = negative ? k2 : stage(combo(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const auto k5 = negative ? k2 : stage(combo(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const auto k6 =
            negative ? k2 : stage(combo(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        std::vector<double> ynew =
            negative ? y : combo(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
        if (negative || !nonneg(ynew)) {
            ++tr.stats.rejected;
            h *= 0.5;
            continue;
        }
        const auto k7 = f(ynew);
        double err = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = opts.atol + opts.rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            err += (e / sc) * (e / sc);
        }
        err = n ? std::sqrt(err / static_cast<double>(n)) : 0.0;
        const double fac = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (err > 1.0) {
            ++tr.stats.rejected;
            h *= std::max(0.2, fac);
            continue;
        }
        ++tr.stats.accepted;
        const double tnew = t + h;
        if (outputs.empty()) {
            emit(tnew, ynew);
        } else {
            while (next_out < outputs.size() && outputs[next_out] <= tnew) {
                const double th = (outputs[next_out] - t) / h;
                const double th1 = 1.0 - th;
                std::vector<double> yo(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const double ydiff = ynew[i] - y[i];
                    const double bspl = h * k1[i] - ydiff;
                    const double r5 =
                        h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
                    yo[i] = y[i] + th * (ydiff + th1 * (bspl + th * ((ydiff - h * k7[i] - bspl) + th1 * r5)));
                }
                emit(outputs[next_out++], yo);
            }
        }
        t = tnew;
        y = std::move(ynew);
        k1 = k7;
        h *= fac;
    }
    return tr;
}

struct NewtonOptions {
    std::size_t max_iterations = 50;
    double tolerance = 1e-12;
    double step_tolerance = 1e-9;
};

struct NewtonResult {
    std::vector<double> x;
    bool converged = false;
    std::size_t iterations = 0;
    double residual = 0.0;
};

// Steady-state refinement inside the compatibility class {W^T x = c}:
// damped Newton on [Q^T f(x); W^T x - c], projected onto x >= 0.
class SteadyStateSolver {
public:
    SteadyStateSolver(const ReactionNetwork& net) : net_(net) {
        const RationalMatrix s = stoichiometric_matrix(net);
        rank_ = rank(s);
        q_ = image_basis(net, rank_);
        auto basis = left_kernel_basis(s);
        w_ = DenseMatrix(static_cast<Eigen::Index>(net.num_species()), static_cast<Eigen::Index>(basis.dimension()));
        for (std::size_t c = 0; c < basis.dimension(); ++c)
            for (std::size_t m = 0; m < net.num_species(); ++m)
                w_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(c)) = basis.vectors[c][m].convert_to<double>();
    }

    std::size_t rank_s() const { return rank_; }
    const DenseMatrix& image() const { return q_; }
    const DenseMatrix& conservation() const { return w_; }

    Eigen::VectorXd totals(const std::vector<double>& x) const {
        return w_.transpose() * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    }

    NewtonResult solve(const KineticModel& model, std::vector<double> x, const Eigen::VectorXd& c,
                       const NewtonOptions& opts = {}) const {
        NewtonResult res;
        const Eigen::Index n = static_cast<Eigen::Index>(x.size());
        auto residual = [&](const std::vector<double>& xx) {
            Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(model.rhs(xx).data(), n);
            Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(xx.data(), n);
            Eigen::VectorXd r(n);
            r << q_.transpose() * f, w_.transpose() * xv - c;
            return r;
        };
        for (auto& v : x) v = std::max(v, 0.0);
        Eigen::VectorXd r = residual(x);
        double last_step = std::numeric_limits<double>::infinity();
        auto small_step = [&] {
            double scale = 1.0;
            for (double v : x) scale = std::max(scale, std::fabs(v));
            return last_step <= opts.step_tolerance * scale;
        };
        for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
            if (r.lpNorm<Eigen::Infinity>() <= opts.tolerance && small_step()) break;
            DenseMatrix jac(n, n);
            jac << q_.transpose() * numeric_jacobian(model, x), w_.transpose();
            Eigen::VectorXd step = jac.fullPivLu().solve(-r);
            if (!step.allFinite()) break;
            double lambda = 1.0;
            const double r0 = r.norm();
            bool improved = false;
            for (int b = 0; b < 30; ++b) {
                std::vector<double> trial(x);
                for (Eigen::Index i = 0; i < n; ++i) trial[static_cast<std::size_t>(i)] = std::max(0.0, x[static_cast<std::size_t>(i)] + lambda * step(i));
                Eigen::VectorXd rt = residual(trial);
                if (rt.allFinite() && (rt.norm() < r0 || (r0 <= opts.tolerance && rt.norm() <= opts.tolerance))) {
                    last_step = 0;
                    for (Eigen::Index i = 0; i < n; ++i)
                        last_step = std::max(last_step, std::fabs(trial[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)]));
                    x = std::move(trial);
                    r = rt;
                    improved = true;
                    break;
                }
                lambda *= 0.5;
            }
            if (!improved) break;
        }
        res.residual = r.lpNorm<Eigen::Infinity>();
        res.converged = res.residual <= opts.tolerance && small_step();
        res.x = std::move(x);
        return res;
    }

    std::vector<std::complex<double>> reduced_spectrum(const KineticModel& model, const std::vector<double>& x) const {
        return eigenvalues(reduced_jacobian(numeric_jacobian(model, x), q_));
    }

private:
    ReactionNetwork net_;
    std::size_t rank_ = 0;
    DenseMatrix q_;
    DenseMatrix w_;
};

inline NewtonResult refine_steady_state(const KineticModel& model, const std::vector<double>& x0,
                                        const NewtonOptions& opts = {}) {
    SteadyStateSolver solver(model.network);
    return solver.solve(model, x0, solver.totals(x0), opts);
}

// Explicit two-species pitchfork model with rate (x/(1+beta x))^2 y.
namespace mi {

inline double f(double x, double beta) { return x / (1.0 + beta * x); }
inline double fprime(double x, double beta) { return 1.0 / ((1.0 + beta * x) * (1.0 + beta * x)); }
inline double rate(double x, double y, double beta) { return f(x, beta) * f(x, beta) * y; }

// Reduced scalar ODE for the first species on the class x1 + x2 = K.
inline double H(double x, double beta, double K = 1.0) { return -rate(x, K - x, beta) + rate(K - x, x, beta); }

inline double Hprime(double x, double beta, double K = 1.0) {
    const double w = K - x;
    return -2 * f(x, beta) * fprime(x, beta) * w + f(x, beta) * f(x, beta) - 2 * f(w, beta) * fprime(w, beta) * x +
           f(w, beta) * f(w, beta);
}

inline KineticModel model(const ReactionNetwork& net, double beta) {
    RateLaw law;
    law.kind = LawKind::ExplicitMI;
    law.beta = beta;
    KineticModel m = uniform_model(net, law);
    m.kinetic_symmetry = net.symmetry.has_value() && m.symmetric_laws();
    return m;
}

}  // namespace mi

struct ScalarSteadyState {
    double value = 0.0;
    Stability stability = Stability::Marginal;
    double derivative = 0.0;
    std::string label;
};

inline std::vector<ScalarSteadyState> steady_states_mi(double beta, double K = 1.0) {
    if (beta < 0) throw std::invalid_argument("steady_states_mi: beta must be nonnegative");
    std::vector<ScalarSteadyState> out;
    auto add = [&](double x, const std::string& label) {
        const double d = mi::Hprime(x, beta, K);
        Stability s = d > kStabilityBand ? Stability::Unstable : (d < -kStabilityBand ? Stability::Stable : Stability::Marginal);
        out.push_back(ScalarSteadyState{x, s, d, label});
    };
    add(0.0, "E_B1");
    add(K / 2, "E_k");
    add(K, "E_B2");
    const double disc = K * K / 4 - (beta > 0 ? 1.0 / (beta * beta) : std::numeric_limits<double>::infinity());
    if (disc > 0) {
        add(K / 2 - std::sqrt(disc), "E_i1");
        add(K / 2 + std::sqrt(disc), "E_i2");
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
    return out;
}

struct BranchPoint {
    double param = 0.0;
    std::size_t state_index = 0;
    std::vector<double> state;
    double value = 0.0;
    Stability stability = Stability::Marginal;
};

struct ScanOptions {
    std::size_t multistart = 24;
    std::uint64_t seed = 12345;
    std::size_t jobs = 1;
    std::size_t observe = 0;
    double dedup_tolerance = 1e-4;
    NewtonOptions newton;
};

struct ScanResult {
    std::vector<BranchPoint> points;
    std::vector<double> gaps;  // grid values where no seed converged
};

// Steady states of a one-parameter family on a grid, inside the class of x_ref.
inline ScanResult bifurcation_scan(const std::function<KineticModel(double)>& family, const std::vector<double>& grid,
                                   const std::vector<double>& x_ref, const ScanOptions& opts = {}) {
    ScanResult result;
    if (grid.empty()) return result;
    const KineticModel probe = family(grid.front());
    const SteadyStateSolver solver(probe.network);
    const Eigen::VectorXd c = solver.totals(x_ref);
    const std::size_t nm = probe.network.num_species();

    std::vector<std::vector<std::vector<double>>> found(grid.size());
    auto add_unique = [&](std::vector<std::vector<double>>& list, const std::vector<double>& x) {
        for (const auto& y : list) {
            double d = 0, s = 0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                d = std::max(d, std::fabs(x[i] - y[i]));
                s = std::max(s, std::fabs(y[i]));
            }
            if (d <= opts.dedup_tolerance * std::max(1.0, s)) return;
        }
        list.push_back(x);
    };
    parallel_for(grid.size(), resolve_jobs(opts.jobs), [&](std::size_t g, std::size_t) {
        const KineticModel model = family(grid[g]);
        std::mt19937_64 rng(opts.seed + 7919 * g);
        std::uniform_real_distribution<double> u(std::log(1e-3), std::log(1e1));
        std::vector<std::vector<double>> seeds{x_ref};
        for (std::size_t s = 0; s < opts.multistart; ++s) {
            std::vector<double> x(nm);
            for (auto& v : x) v = std::exp(u(rng));
            seeds.push_back(std::move(x));
        }
        for (const auto& seed : seeds) {
            auto r = solver.solve(model, seed, c, opts.newton);
            if (r.converged) add_unique(found[g], r.x);
        }
    });
    // Continuation pass: seed each grid value from the states found at its neighbour.
    for (std::size_t g = 1; g < grid.size(); ++g) {
        const KineticModel model = family(grid[g]);
        for (const auto& prev : found[g - 1]) {
            auto r = solver.solve(model, prev, c, opts.newton);
            if (r.converged) add_unique(found[g], r.x);
        }
    }
    for (std::size_t g = grid.size() - 1; g-- > 0;) {
        const KineticModel model = family(grid[g]);
        for (const auto& next : found[g + 1]) {
            auto r = solver.solve(model, next, c, opts.newton);
            if (r.converged) add_unique(found[g], r.x);
        }
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (found[g].empty()) {
            result.gaps.push_back(grid[g]);
            continue;
        }
        const KineticModel model = family(grid[g]);
        auto states = found[g];
        std::sort(states.begin(), states.end(), [&](const auto& a, const auto& b) {
            return a[opts.observe] != b[opts.observe] ? a[opts.observe] < b[opts.observe] : a < b;
        });
        for (std::size_t i = 0; i < states.size(); ++i) {
            BranchPoint p;
            p.param = grid[g];
            p.state_index = i;
            p.state = states[i];
            p.value = states[i][opts.observe];
            p.stability = classify_spectrum(solver.reduced_spectrum(model, states[i]));
            result.points.push_back(std::move(p));
        }
    }
    return result;
}

struct MonotoneViolation {
    int property = 0;
    std::vector<double> x;
    std::string detail;
};

struct MonotoneReport {
    bool ok = true;
    std::size_t samples = 0;
    std::vector<MonotoneViolation> violations;
};

struct SamplePlan {
    std::vector<double> levels{1e-3, 0.1, 1.0, 10.0};
    std::size_t random_samples = 64;
    std::uint64_t seed = 7;
};

// Samples the four monotone-chemical properties of one reaction's law:
// nonnegativity, vanishing exactly on reactant-zero faces, dependence on
// reactants only, and strictly positive partials in the reactants.
inline MonotoneReport validate_monotone_chemical(const ReactionNetwork& net, std::size_t reaction, const RateLaw& law,
                                                 const SamplePlan& plan = {}) {
    MonotoneReport rep;
    const Reaction& rx = net.reactions.at(reaction);
    const std::size_t nm = net.num_species();
    std::vector<std::vector<double>> points;
    for (double lvl : plan.levels) points.push_back(std::vector<double>(nm, lvl));
    std::mt19937_64 rng(plan.seed);
    std::uniform_real_distribution<double> u(std::log(plan.levels.front()), std::log(plan.levels.back()));
    for (std::size_t s = 0; s < plan.random_samples; ++s) {
        std::vector<double> x(nm);
        for (auto& v : x) v = std::exp(u(rng));
        points.push_back(std::move(x));
    }
    auto fail = [&](int prop, const std::vector<double>& x, const std::string& d) {
        rep.ok = false;
        if (rep.violations.size() < 16) rep.violations.push_back(MonotoneViolation{prop, x, d});
    };
    for (const auto& x : points) {
        ++rep.samples;
        const double r = rate_value(rx, law, x);
        if (!(r >= 0)) fail(1, x, "negative rate");
        if (!(r > 0) && !rx.reactants.empty()) fail(2, x, "rate vanishes at a positive state");
        for (auto [m, c] : rx.reactants) {
            auto face = x;
            face[m] = 0.0;
            if (rate_value(rx, law, face) != 0.0) fail(2, face, "rate nonzero with a vanishing reactant");
            const double h = 1e-6 * x[m];
            auto up = x, down = x;
            up[m] += h;
            down[m] -= h;
            if (!(rate_value(rx, law, up) - rate_value(rx, law, down) > 0))
                fail(4, x, "partial derivative not positive in " + net.species[m].name);
        }
        for (std::size_t m = 0; m < nm; ++m) {
            if (rx.reactant_coeff(m) > 0) continue;
            auto y = x;
            y[m] *= 3.0;
            if (rate_value(rx, law, y) != r) fail(3, x, "rate depends on non-reactant " + net.species[m].name);
        }
    }
    return rep;
}

}  // namespace crn
