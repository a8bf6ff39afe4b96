#pragma once

#include "crn/child_selection.hpp"
#include "crn/linalg.hpp"
#include "crn/network.hpp"
#include "crn/parallel.hpp"
#include "crn/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crn {

struct ReactivitySymbol {
    std::size_t reaction = 0;
    std::size_t species = 0;
    SymbolId canonical = 0;
    std::string name;
};

// Symbols r_{jm} for every reactant pair, with an optional identification
// r_{jm} ~ r_{sigma(j) sigma(m)}. Raw ids follow (reaction, species) order;
// canonical ids follow the order of their smallest raw representative.
class SymbolTable {
public:
    SymbolTable() = default;
    SymbolTable(const ReactionNetwork& net, bool use_symmetry) {
        for (const auto& r : net.reactions)
            for (auto [m, c] : r.reactants)
                if (c > 0) {
                    index_[{r.id, m}] = static_cast<SymbolId>(raw_.size());
                    raw_.push_back(ReactivitySymbol{r.id, m, 0, "r_{" + r.label + "," + net.species[m].name + "}"});
                }
        raw_swap_.resize(raw_.size());
        for (SymbolId i = 0; i < raw_.size(); ++i) {
            raw_swap_[i] = i;
            if (net.symmetry) {
                auto it = index_.find({net.symmetry->reaction_perm[raw_[i].reaction],
                                       net.symmetry->species_perm[raw_[i].species]});
                if (it == index_.end()) throw NetworkError("symmetry does not preserve the reactant pattern");
                raw_swap_[i] = it->second;
            }
        }
        symmetric_ = use_symmetry && net.symmetry.has_value();
        for (SymbolId i = 0; i < raw_.size(); ++i) {
            const SymbolId partner = symmetric_ ? raw_swap_[i] : i;
            if (partner < i) {
                raw_[i].canonical = raw_[partner].canonical;
                continue;
            }
            raw_[i].canonical = static_cast<SymbolId>(representatives_.size());
            representatives_.push_back(i);
        }
        canonical_map_.resize(raw_.size());
        for (SymbolId i = 0; i < raw_.size(); ++i) canonical_map_[i] = raw_[i].canonical;
    }

    bool symmetric() const { return symmetric_; }
    std::size_t num_raw() const { return raw_.size(); }
    std::size_t num_canonical() const { return representatives_.size(); }
    const ReactivitySymbol& raw(SymbolId i) const { return raw_.at(i); }
    const std::vector<ReactivitySymbol>& raw_symbols() const { return raw_; }
    std::optional<SymbolId> raw_id(std::size_t reaction, std::size_t species) const {
        auto it = index_.find({reaction, species});
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    SymbolId representative(SymbolId canonical) const { return representatives_.at(canonical); }
    const std::string& raw_name(SymbolId i) const { return raw_.at(i).name; }
    const std::string& canonical_name(SymbolId c) const { return raw_.at(representatives_.at(c)).name; }
    std::optional<SymbolId> canonical_by_name(const std::string& name) const {
        for (const auto& s : raw_)
            if (s.name == name) return s.canonical;
        return std::nullopt;
    }
    const std::vector<SymbolId>& canonical_map() const { return canonical_map_; }
    // Raw symbol involution induced by the network symmetry (identity without one).
    const std::vector<SymbolId>& raw_involution() const { return raw_swap_; }

    Polynomial quotient(const Polynomial& raw_poly) const { return raw_poly.rename(canonical_map_); }

    template <class T>
    std::vector<T> expand(const std::vector<T>& canonical_values) const {
        std::vector<T> out(raw_.size());
        for (SymbolId i = 0; i < raw_.size(); ++i) out[i] = canonical_values.at(raw_[i].canonical);
        return out;
    }

private:
    std::vector<ReactivitySymbol> raw_;
    std::map<std::pair<std::size_t, std::size_t>, SymbolId> index_;
    std::vector<SymbolId> raw_swap_;
    std::vector<SymbolId> representatives_;
    std::vector<SymbolId> canonical_map_;
    bool symmetric_ = false;
};

// |E| x |M| matrix of canonical symbol ids; nullopt where s^j_m = 0.
inline std::vector<std::vector<std::optional<SymbolId>>> symbolic_reactivity(const ReactionNetwork& net,
                                                                             const SymbolTable& table) {
    std::vector<std::vector<std::optional<SymbolId>>> r(net.num_reactions(),
                                                        std::vector<std::optional<SymbolId>>(net.num_species()));
    for (const auto& s : table.raw_symbols()) r[s.reaction][s.species] = s.canonical;
    return r;
}

struct CharPoly {
    SymbolTable symbols;
    // principal_sums[k]: sum of k x k principal minors of G in raw symbols.
    std::vector<Polynomial> principal_sums;
    // coefficients[k]: coefficient of lambda^(|M|-k) in det(G - lambda I), canonical symbols.
    std::vector<Polynomial> coefficients;

    std::string name(SymbolId c) const { return symbols.canonical_name(c); }
};

namespace detail {

inline std::vector<Polynomial> coefficients_from_sums(const std::vector<Polynomial>& sums, const SymbolTable& t) {
    const std::size_t n = sums.empty() ? 0 : sums.size() - 1;
    std::vector<Polynomial> a(sums.size());
    for (std::size_t k = 0; k < sums.size(); ++k) {
        const long long sign = (n - k) % 2 == 0 ? 1 : -1;
        a[k] = t.quotient(sign * sums[k]);
    }
    return a;
}

}  // namespace detail

struct SymbolicOptions {
    bool use_symmetry = true;
    std::size_t jobs = 1;
};

// Characteristic-polynomial coefficients by Child-Selection expansion:
// E_k = sum over k-CS of det S[kappa] * prod r_{J(m) m}.
inline CharPoly char_poly_coefficients(const ReactionNetwork& net, const SymbolicOptions& opts = {}) {
    CharPoly cp;
    cp.symbols = SymbolTable(net, opts.use_symmetry);
    const std::size_t nm = net.num_species();
    const auto s = stoichiometric_ints(net);
    const auto consumers = detail::consumers_of(net);
    std::vector<std::vector<std::size_t>> tasks;
    const std::size_t kmax = std::min(nm, net.num_reactions());
    for (std::size_t k = 1; k <= kmax; ++k)
        for (auto& kappa : detail::combinations(nm, k)) tasks.push_back(std::move(kappa));
    std::vector<Polynomial> partial(tasks.size());
    const SymbolTable& table = cp.symbols;
    parallel_for(tasks.size(), resolve_jobs(opts.jobs), [&](std::size_t t, std::size_t) {
        const auto& kappa = tasks[t];
        const std::size_t k = kappa.size();
        std::vector<long long> a(k * k);
        for_each_matching(
            net, kappa,
            [&](const ChildSelection& sel) {
                for (std::size_t r = 0; r < k; ++r)
                    for (std::size_t c = 0; c < k; ++c) a[r * k + c] = s[sel.kappa[r]][sel.j_map[c]];
                const long long d = det_int(a, k);
                if (d == 0) return;
                Monomial mono(k);
                for (std::size_t i = 0; i < k; ++i) mono[i] = *table.raw_id(sel.j_map[i], sel.kappa[i]);
                std::sort(mono.begin(), mono.end());
                partial[t].add_term(std::move(mono), d);
            },
            &consumers);
    });
    cp.principal_sums.assign(nm + 1, Polynomial());
    cp.principal_sums[0] = Polynomial(1);
    for (std::size_t t = 0; t < tasks.size(); ++t) cp.principal_sums[tasks[t].size()] += partial[t];
    cp.coefficients = detail::coefficients_from_sums(cp.principal_sums, cp.symbols);
    return cp;
}

constexpr std::size_t kOracleMaxSpecies = 8;

// Independent check: det(G - lambda I) by Laplace expansion of the symbolic
// Jacobian G = S R. Returns coefficients indexed like CharPoly::coefficients.
inline std::vector<Polynomial> oracle_char_poly(const ReactionNetwork& net, bool use_symmetry = true) {
    const std::size_t n = net.num_species();
    if (n > kOracleMaxSpecies) throw std::invalid_argument("oracle_char_poly: too many species");
    SymbolTable table(net, use_symmetry);
    if (n == 0) return {};
    const SymbolId lambda = static_cast<SymbolId>(table.num_raw());
    const auto s = stoichiometric_ints(net);
    std::vector<std::vector<Polynomial>> a(n, std::vector<Polynomial>(n));
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t mp = 0; mp < n; ++mp) {
            Polynomial g;
            for (std::size_t j = 0; j < net.num_reactions(); ++j) {
                if (s[m][j] == 0) continue;
                if (auto id = table.raw_id(j, mp)) g += Polynomial::symbol(*id, s[m][j]);
            }
            if (m == mp) g -= Polynomial::symbol(lambda);
            a[m][mp] = std::move(g);
        }
    std::vector<Polynomial> d(std::size_t{1} << n);
    d[0] = Polynomial(1);
    for (std::size_t mask = 1; mask < d.size(); ++mask) {
        const std::size_t t = static_cast<std::size_t>(__builtin_popcountll(mask)) - 1;
        Polynomial acc;
        for (std::size_t c = 0; c < n; ++c) {
            if (!(mask >> c & 1)) continue;
            if (a[t][c].is_zero() || d[mask ^ (std::size_t{1} << c)].is_zero()) continue;
            const std::size_t p = static_cast<std::size_t>(__builtin_popcountll(mask & ((std::size_t{1} << c) - 1)));
            const long long sign = (t + p) % 2 == 0 ? 1 : -1;
            acc += sign * (a[t][c] * d[mask ^ (std::size_t{1} << c)]);
        }
        d[mask] = std::move(acc);
    }
    auto by_power = d.back().split_by_power(lambda);
    std::vector<Polynomial> out(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        auto it = by_power.find(static_cast<int>(n - k));
        if (it != by_power.end()) out[k] = table.quotient(it->second);
    }
    return out;
}

// Minimal unstable-positive feedbacks read off the Hasse diagram of the
// sign-(-1)^(k-1) monomials of E_k ordered by inclusion: the roots.
inline std::vector<UnstableFeedback> find_unstable_positive_feedbacks_hasse(const ReactionNetwork& net,
                                                                            std::size_t jobs = 1) {
    SymbolicOptions opts;
    opts.use_symmetry = false;
    opts.jobs = jobs;
    const CharPoly cp = char_poly_coefficients(net, opts);
    const std::size_t words = (cp.symbols.num_raw() + 63) / 64;
    struct Node {
        std::size_t k;
        Monomial mono;
        std::vector<std::uint64_t> bits;
    };
    std::vector<Node> nodes;
    for (std::size_t k = 1; k < cp.principal_sums.size(); ++k)
        for (const auto& [mono, coeff] : cp.principal_sums[k].terms()) {
            if ((coeff > 0 ? 1 : -1) != positive_feedback_sign(k)) continue;
            Node node{k, mono, std::vector<std::uint64_t>(words, 0)};
            for (auto sym : mono) node.bits[sym / 64] |= std::uint64_t{1} << (sym % 64);
            nodes.push_back(std::move(node));
        }
    auto subset = [&](const Node& a, const Node& b) {
        for (std::size_t w = 0; w < words; ++w)
            if (a.bits[w] & ~b.bits[w]) return false;
        return true;
    };
    std::vector<bool> is_root(nodes.size(), true);
    parallel_for(nodes.size(), resolve_jobs(jobs), [&](std::size_t i, std::size_t) {
        for (std::size_t j = 0; j < nodes.size(); ++j)
            if (nodes[j].k < nodes[i].k && subset(nodes[j], nodes[i])) {
                is_root[i] = false;
                return;
            }
    });
    std::vector<UnstableFeedback> out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!is_root[i]) continue;
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (auto sym : nodes[i].mono) pairs.emplace_back(cp.symbols.raw(sym).species, cp.symbols.raw(sym).reaction);
        std::sort(pairs.begin(), pairs.end());
        ChildSelection sel;
        for (auto [m, j] : pairs) {
            sel.kappa.push_back(m);
            sel.j_map.push_back(j);
        }
        auto csm = cs_matrix(net, sel);
        out.push_back(UnstableFeedback{sel, csm.matrix, classify(csm.matrix)});
    }
    sort_feedbacks(out);
    return out;
}

enum class CapacityStatus { NoCapacity, Capable, Degenerate, Inconsistent };

inline std::string to_string(CapacityStatus s) {
    switch (s) {
        case CapacityStatus::NoCapacity: return "NoCapacity";
        case CapacityStatus::Capable: return "Capable";
        case CapacityStatus::Degenerate: return "Degenerate";
        case CapacityStatus::Inconsistent: return "Inconsistent";
    }
    return "unknown";
}

struct CapacityVerdict {
    CapacityStatus status = CapacityStatus::Inconsistent;
    std::optional<RationalVector> flux;
    ConservationBasis conservation;
    std::size_t conservation_dim = 0;
    std::size_t k_tilde = 0;
    bool nondegenerate = false;
    CharPoly charpoly;
    std::optional<std::pair<Monomial, long long>> positive_monomial;
    std::optional<std::pair<Monomial, long long>> negative_monomial;
    // Canonical symbol values with a_{k_tilde} = 0, scaled so that the largest is 1.
    std::optional<std::vector<double>> witness;
    double witness_residual = 0.0;
    std::size_t witness_iterations = 0;
    // Endpoints of the bisection segment, same scaling as the witness.
    std::optional<std::pair<std::vector<double>, std::vector<double>>> witness_endpoints;

    const Polynomial& top() const { return charpoly.coefficients.at(k_tilde); }
};

struct CapacityOptions {
    bool use_symmetry = true;
    std::size_t jobs = 1;
    std::uint64_t seed = 20240101;
    double witness_tolerance = 1e-12;
    std::size_t max_bisections = 200;
};

namespace detail {

using Real = long double;

inline std::vector<Real> emphasize(std::size_t nsym, const Monomial& m, Real t) {
    std::vector<Real> v(nsym, 1.0L);
    for (auto s : m) v[s] = t;
    return v;
}

// Positive assignment where poly has the requested sign, or nullopt.
inline std::optional<std::vector<Real>> find_signed_point(const Polynomial& poly, std::size_t nsym, int want,
                                                          std::mt19937_64& rng) {
    for (const auto& [mono, coeff] : poly.terms()) {
        if ((coeff > 0 ? 1 : -1) != want) continue;
        for (int e = 1; e <= 40; ++e) {
            auto v = emphasize(nsym, mono, std::ldexp(1.0L, e));
            Real f = poly.evaluate(v);
            if ((f > 0 ? 1 : (f < 0 ? -1 : 0)) == want) return v;
        }
    }
    std::uniform_real_distribution<double> u(std::log(1e-3), std::log(1e3));
    for (int trial = 0; trial < 20000; ++trial) {
        std::vector<Real> v(nsym);
        for (auto& x : v) x = std::exp(static_cast<Real>(u(rng)));
        Real f = poly.evaluate(v);
        if ((f > 0 ? 1 : (f < 0 ? -1 : 0)) == want) return v;
    }
    return std::nullopt;
}

}  // namespace detail

struct WitnessResult {
    std::vector<double> values;
    std::vector<double> positive_end;
    std::vector<double> negative_end;
    double residual = 0.0;
    std::size_t iterations = 0;
};

// Bisection along the segment between a positive and a negative point of poly.
inline std::optional<WitnessResult> find_zero_witness(const Polynomial& poly, std::size_t nsym,
                                                      const CapacityOptions& opts = {}) {
    using detail::Real;
    std::mt19937_64 rng(opts.seed);
    auto p = detail::find_signed_point(poly, nsym, 1, rng);
    auto q = detail::find_signed_point(poly, nsym, -1, rng);
    if (!p || !q) return std::nullopt;
    auto at = [&](Real s) {
        std::vector<Real> v(nsym);
        for (std::size_t i = 0; i < nsym; ++i) v[i] = (1 - s) * (*p)[i] + s * (*q)[i];
        return v;
    };
    Real lo = 0, hi = 1;
    std::vector<Real> x = at(0.5L);
    std::size_t it = 0;
    for (; it < opts.max_bisections; ++it) {
        const Real mid = (lo + hi) / 2;
        x = at(mid);
        const Real f = poly.evaluate(x);
        const Real mag = poly.magnitude(x);
        if (std::fabs(f) <= static_cast<Real>(opts.witness_tolerance) * mag) break;
        if (f > 0)
            lo = mid;
        else
            hi = mid;
    }
    Real mx = 0;
    for (auto v : x) mx = std::max(mx, v);
    WitnessResult w;
    std::vector<Real> scaled(nsym);
    for (std::size_t i = 0; i < nsym; ++i) scaled[i] = x[i] / mx;
    for (auto v : scaled) w.values.push_back(static_cast<double>(v));
    for (std::size_t i = 0; i < nsym; ++i) {
        w.positive_end.push_back(static_cast<double>((*p)[i] / mx));
        w.negative_end.push_back(static_cast<double>((*q)[i] / mx));
    }
    std::vector<Real> as_double(w.values.begin(), w.values.end());
    const Real mag = poly.magnitude(as_double);
    w.residual = mag > 0 ? static_cast<double>(std::fabs(poly.evaluate(as_double)) / mag) : 0.0;
    w.iterations = it;
    return w;
}

inline CapacityVerdict capacity_for_differentiation(const ReactionNetwork& net, const CapacityOptions& opts = {}) {
    CapacityVerdict v;
    const RationalMatrix s = stoichiometric_matrix(net);
    v.flux = positive_kernel_vector(s);
    v.conservation = left_kernel_basis(s);
    v.conservation_dim = v.conservation.dimension();
    SymbolicOptions so;
    so.use_symmetry = opts.use_symmetry;
    so.jobs = opts.jobs;
    v.charpoly = char_poly_coefficients(net, so);
    for (std::size_t k = v.charpoly.coefficients.size(); k-- > 1;)
        if (!v.charpoly.coefficients[k].is_zero()) {
            v.k_tilde = k;
            break;
        }
    v.nondegenerate = v.k_tilde == net.num_species() - v.conservation_dim;
    if (!v.flux) {
        v.status = CapacityStatus::Inconsistent;
        return v;
    }
    if (!v.nondegenerate || v.k_tilde == 0) {
        v.status = CapacityStatus::Degenerate;
        return v;
    }
    const Polynomial& top = v.top();
    for (const auto& [mono, coeff] : top.terms()) {
        if (coeff > 0 && !v.positive_monomial) v.positive_monomial = std::make_pair(mono, coeff);
        if (coeff < 0 && !v.negative_monomial) v.negative_monomial = std::make_pair(mono, coeff);
    }
    if (!top.has_mixed_signs()) {
        v.status = CapacityStatus::NoCapacity;
        return v;
    }
    v.status = CapacityStatus::Capable;
    if (auto w = find_zero_witness(top, v.charpoly.symbols.num_canonical(), opts)) {
        v.witness = w->values;
        v.witness_residual = w->residual;
        v.witness_iterations = w->iterations;
        v.witness_endpoints = std::make_pair(w->positive_end, w->negative_end);
    }
    return v;
}

struct DiagonalDominance {
    bool structural = false;
    bool symbolic = false;
    bool holds() const { return structural && symbolic; }
};

// Structural part: coefficients in {0,1} and every species in at most two
// reactions. Symbolic part: H = R S has negative diagonal and is weakly
// diagonally dominant by rows for every positive choice of symbols.
inline DiagonalDominance diagonal_dominance_check(const ReactionNetwork& net) {
    DiagonalDominance d;
    d.structural = true;
    std::vector<std::set<std::size_t>> participation(net.num_species());
    for (const auto& r : net.reactions) {
        for (auto [m, c] : r.reactants) {
            if (c > 1) d.structural = false;
            participation[m].insert(r.id);
        }
        for (auto [m, c] : r.products) {
            if (c > 1) d.structural = false;
            participation[m].insert(r.id);
        }
    }
    for (const auto& p : participation)
        if (p.size() > 2) d.structural = false;

    // H_ij = sum_m r_{im} S_mj is linear in the symbols of row i, so dominance
    // for all positive symbols holds iff it holds symbol by symbol.
    const auto s = stoichiometric_ints(net);
    d.symbolic = true;
    for (const auto& r : net.reactions) {
        if (r.reactants.empty()) {
            d.symbolic = false;
            continue;
        }
        for (auto [m, c] : r.reactants) {
            const long long diag = s[m][r.id];
            long long off = 0;
            for (std::size_t j = 0; j < net.num_reactions(); ++j)
                if (j != r.id) off += std::llabs(s[m][j]);
            if (diag >= 0 || -diag < off) d.symbolic = false;
        }
    }
    return d;
}

enum class TraceSign { AlwaysNegative, Mixed };

inline std::string to_string(TraceSign t) { return t == TraceSign::AlwaysNegative ? "AlwaysNegative" : "Mixed"; }

struct TraceAnalysis {
    TraceSign sign = TraceSign::Mixed;
    Polynomial trace;
    SymbolTable symbols;
};

inline TraceAnalysis trace_sign_analysis(const ReactionNetwork& net, const std::set<std::string>& frozen = {},
                                         bool use_symmetry = true) {
    const ReactionNetwork reduced = freeze_species(net, frozen);
    TraceAnalysis t;
    t.symbols = SymbolTable(reduced, use_symmetry);
    const auto s = stoichiometric_ints(reduced);
    Polynomial raw;
    for (const auto& sym : t.symbols.raw_symbols())
        raw += Polynomial::symbol(static_cast<SymbolId>(&sym - t.symbols.raw_symbols().data()),
                                  s[sym.species][sym.reaction]);
    t.trace = t.symbols.quotient(raw);
    t.sign = t.trace.uniform_sign() == -1 ? TraceSign::AlwaysNegative : TraceSign::Mixed;
    return t;
}

}  // namespace crn
