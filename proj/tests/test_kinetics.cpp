#include "oracles.hpp"

#include <gtest/gtest.h>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <filesystem>

using namespace crn;

namespace {

ReactionNetwork model(const std::string& name) {
    return parse_network_file(std::string(CRN_MODELS_DIR) + "/" + name + ".crn").network;
}

std::vector<std::string> corpus() {
    std::vector<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(CRN_MODELS_DIR))
        if (e.path().extension() == ".crn") names.push_back(e.path().stem().string());
    std::sort(names.begin(), names.end());
    return names;
}

// Roots of x -> f_1(x, 1 - x) for the two-species model, bracketed on a fine
// grid and polished with TOMS 748.
std::vector<double> mi_roots_numeric(const KineticModel& m) {
    auto g = [&](double x) { return m.rhs({x, 1.0 - x})[0]; };
    std::vector<double> roots{0.0, 1.0};
    const int n = 4000;
    for (int i = 1; i < n; ++i) {
        const double a = static_cast<double>(i) / n, b = static_cast<double>(i + 1) / n;
        if (b >= 1.0) break;
        const double ga = g(a), gb = g(b);
        if (ga == 0.0) {
            roots.push_back(a);
            continue;
        }
        if ((ga < 0) == (gb < 0) || gb == 0.0) continue;
        boost::uintmax_t iters = 200;
        auto r = boost::math::tools::toms748_solve(g, a, b, ga, gb, boost::math::tools::eps_tolerance<double>(50),
                                                  iters);
        roots.push_back((r.first + r.second) / 2);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace

TEST(MinimalModel, ClosedFormSteadyStates) {
    for (double beta : {2.5, 3.0, 10.0}) {
        const auto states = steady_states_mi(beta);
        ASSERT_EQ(states.size(), 5u) << beta;
        const double d = std::sqrt(0.25 - 1.0 / (beta * beta));
        EXPECT_NEAR(states[1].value, 0.5 - d, 1e-12);
        EXPECT_NEAR(states[3].value, 0.5 + d, 1e-12);
        for (const auto& s : states) EXPECT_NEAR(mi::H(s.value, beta), 0.0, 1e-14);
    }
    const auto at = steady_states_mi(2.5);
    EXPECT_NEAR(at[1].value, 0.2, 1e-12);
    EXPECT_NEAR(at[3].value, 0.8, 1e-12);
    // Below the pitchfork only the homogeneous and boundary states remain.
    EXPECT_EQ(steady_states_mi(1.5).size(), 3u);
    EXPECT_THROW(steady_states_mi(-1.0), std::invalid_argument);
}

TEST(MinimalModel, ClosedFormAgreesWithRootFinding) {
    const auto net = model("MI");
    for (double beta : {2.5, 3.0, 10.0}) {
        const auto roots = mi_roots_numeric(mi::model(net, beta));
        const auto states = steady_states_mi(beta);
        ASSERT_EQ(roots.size(), states.size()) << beta;
        for (std::size_t i = 0; i < roots.size(); ++i) EXPECT_NEAR(roots[i], states[i].value, 1e-9) << beta;
    }
}

TEST(MinimalModel, StabilityOfBranches) {
    for (double beta : {0.5, 1.0, 2.5, 3.0, 10.0}) {
        const auto states = steady_states_mi(beta);
        EXPECT_GT(mi::Hprime(0.0, beta), 0.0);
        EXPECT_EQ(states.front().stability, Stability::Unstable);
        EXPECT_EQ(states.back().stability, Stability::Unstable);
        for (const auto& s : states) {
            // Independent derivative by central difference.
            const double h = 1e-6;
            const double fd = (mi::H(s.value + h, beta) - mi::H(s.value - h, beta)) / (2 * h);
            EXPECT_NEAR(s.derivative, fd, 1e-6);
            if (s.label == "E_k") {
                EXPECT_EQ(s.stability, beta > 2 ? Stability::Unstable : Stability::Stable);
            }
            if (s.label == "E_i1" || s.label == "E_i2") {
                EXPECT_EQ(s.stability, Stability::Stable);
            }
        }
    }
}

TEST(MinimalModel, TwoSpeciesModelMatchesScalarOde) {
    const auto net = model("MI");
    const double beta = 3.0;
    const auto m = mi::model(net, beta);
    EXPECT_TRUE(m.kinetic_symmetry);
    SimulationOptions opts;
    opts.rtol = 1e-12;
    opts.atol = 1e-14;
    opts.output_times = {0.5, 1.0, 5.0, 20.0};
    const auto tr = simulate(m, {0.3, 0.7}, 20.0, opts);
    ASSERT_TRUE(tr.ok) << tr.message;
    ASSERT_EQ(tr.times.size(), 4u);

    using namespace boost::numeric::odeint;
    auto stepper = make_dense_output(1e-14, 1e-14, runge_kutta_dopri5<double>());
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        double x = 0.3;
        integrate_const(stepper, [&](const double& y, double& dy, double) { dy = mi::H(y, beta); }, x, 0.0,
                        tr.times[i], tr.times[i] / 1000);
        EXPECT_NEAR(tr.states[i][0], x, 1e-10) << tr.times[i];
        EXPECT_NEAR(tr.states[i][0] + tr.states[i][1], 1.0, 1e-12);
    }
}

TEST(MinimalModel, SimulationConvergesToSideOfHomogeneousState) {
    const auto net = model("MI");
    const double beta = 3.0;
    const auto m = mi::model(net, beta);
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int trial = 0; trial < 10; ++trial) {
        const double x1 = u(rng);
        if (std::fabs(x1 - 0.5) < 0.01) continue;
        const auto tr = simulate(m, {x1, 1.0 - x1}, 2000.0);
        ASSERT_TRUE(tr.ok);
        const double d = std::sqrt(0.25 - 1.0 / (beta * beta));
        const double expected = x1 < 0.5 ? 0.5 - d : 0.5 + d;
        EXPECT_NEAR(tr.states.back()[0], expected, 1e-6) << x1;
    }
}

TEST(MinimalModel, ScanLocatesPitchfork) {
    const auto net = model("MI");
    std::vector<double> grid;
    for (int i = 0; i <= 30; ++i) grid.push_back(1.5 + 0.05 * i);
    const auto res = bifurcation_scan([&](double b) { return mi::model(net, b); }, grid, {0.5, 0.5});
    EXPECT_TRUE(res.gaps.empty());
    double first = -1;
    for (double b : grid) {
        std::size_t interior = 0;
        for (const auto& p : res.points)
            if (p.param == b && p.value > 1e-6 && p.value < 1 - 1e-6) ++interior;
        if (interior > 1) {
            first = b;
            break;
        }
    }
    EXPECT_NEAR(first, 2.0, 0.05 + 1e-12);
    for (const auto& p : res.points)
        if (std::fabs(p.value - 0.5) < 1e-6 && p.param > 2.05) {
            EXPECT_EQ(p.stability, Stability::Unstable);
        }
}

TEST(Simulation, ConservationDriftOnCentralModel) {
    const auto net = model("BI");
    RateLaw law;
    const auto m = uniform_model(net, law);
    std::vector<double> x0;
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (std::size_t i = 0; i < net.num_species(); ++i) x0.push_back(u(rng));
    const auto tr = simulate(m, x0, 100.0);
    ASSERT_TRUE(tr.ok);
    const auto w = left_kernel_basis(stoichiometric_matrix(net));
    for (const auto& vec : w.vectors) {
        auto total = [&](const std::vector<double>& x) {
            double t = 0;
            for (std::size_t i = 0; i < x.size(); ++i) t += vec[i].convert_to<double>() * x[i];
            return t;
        };
        const double c0 = total(x0);
        for (const auto& x : tr.states) EXPECT_LT(std::fabs(total(x) - c0), 1e-6);
    }
}

TEST(Simulation, RejectsBadInput) {
    const auto net = model("MI");
    const auto m = mi::model(net, 3.0);
    EXPECT_THROW(m.rates({1.0}), std::invalid_argument);
    EXPECT_THROW(m.rates({-1.0, 1.0}), std::domain_error);
}

TEST(Realization, ReproducesFluxAndDerivatives) {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0.2, 5.0);
    for (const auto& name : corpus()) {
        const auto net = model(name);
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<double> xbar, v;
            for (std::size_t i = 0; i < net.num_species(); ++i) xbar.push_back(u(rng));
            for (std::size_t j = 0; j < net.num_reactions(); ++j) v.push_back(u(rng));
            const auto rbar = random_rbar(net, rng);
            const auto m = realize_parameters(net, xbar, rbar, v);
            const auto check = check_realization(m, xbar, rbar, v);
            EXPECT_LT(check.flux_error, 1e-12) << name;
            EXPECT_LT(check.jacobian_error, 1e-5) << name;
            // The derivatives themselves, one reaction at a time.
            const auto d = numeric_rate_derivatives(m, xbar);
            for (Eigen::Index j = 0; j < rbar.rows(); ++j)
                for (Eigen::Index i = 0; i < rbar.cols(); ++i)
                    EXPECT_NEAR(d(j, i), rbar(j, i), 1e-5 * std::max(1.0, std::fabs(rbar(j, i)))) << name;
        }
    }
}

TEST(Realization, CentralModelIsStableForRandomKinetics) {
    const auto net = model("BI");
    const auto verdict = capacity_for_differentiation(net);
    ASSERT_TRUE(verdict.flux);
    const auto v = to_doubles(*verdict.flux);
    const std::vector<double> xbar(net.num_species(), 1.0);
    const auto q = image_basis(net, net.num_species() - verdict.conservation_dim);
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 50; ++trial) {
        const auto rbar = random_rbar(net, rng);
        const auto m = realize_parameters(net, xbar, rbar, v);
        for (double r : m.rhs(xbar)) EXPECT_NEAR(r, 0.0, 1e-12);
        for (auto ev : eigenvalues(reduced_jacobian(numeric_jacobian(m, xbar), q))) EXPECT_LE(ev.real(), 1e-9);
    }
}

TEST(Realization, RejectsMismatchedSupport) {
    const auto net = model("MI");
    DenseMatrix rbar = DenseMatrix::Ones(2, 2);
    rbar(0, 0) = 0.0;
    EXPECT_THROW(realize_parameters(net, {1.0, 1.0}, rbar, {1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(realize_parameters(net, {1.0, 1.0}, DenseMatrix::Ones(2, 2), {1.0, -1.0}), std::invalid_argument);
}

TEST(Monotone, StandardLawsPass) {
    const auto net = model("BI_BII");
    for (LawKind kind : {LawKind::MassAction, LawKind::GeneralizedMassAction, LawKind::MichaelisMenten, LawKind::Hill,
                         LawKind::ExplicitMI}) {
        RateLaw law;
        law.kind = kind;
        law.k = 2.0;
        law.beta = 1.5;
        for (const auto& r : net.reactions)
            for (auto [m, c] : r.reactants) {
                law.exponent[m] = 0.7;
                law.saturation[m] = 0.3;
                law.hill_n[m] = 2.0;
                law.hill_K[m] = 0.5;
            }
        for (std::size_t j = 0; j < net.num_reactions(); ++j)
            EXPECT_TRUE(validate_monotone_chemical(net, j, law).ok) << to_string(kind) << " reaction " << j;
    }
}

TEST(Monotone, NegativeSaturationIsCaught) {
    const auto net = model("MI");
    RateLaw law;
    law.kind = LawKind::MichaelisMenten;
    law.saturation[1] = -0.5;
    const auto rep = validate_monotone_chemical(net, 0, law);
    EXPECT_FALSE(rep.ok);
    EXPECT_FALSE(rep.violations.empty());
}

TEST(Monotone, SymmetricLawsDetected) {
    const auto net = model("MI");
    auto m = mi::model(net, 2.0);
    EXPECT_TRUE(m.symmetric_laws());
    m.laws[1].beta = 2.5;
    EXPECT_FALSE(m.symmetric_laws());
}
