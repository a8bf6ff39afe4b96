#pragma once

#include "crn/linalg.hpp"
#include "crn/network.hpp"
#include "crn/parallel.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace crn {

// A k-Child-Selection: species kappa[i] is sent to reaction j_map[i], which
// consumes it. kappa is sorted ascending.
struct ChildSelection {
    std::vector<std::size_t> kappa;
    std::vector<std::size_t> j_map;

    std::size_t size() const { return kappa.size(); }
    std::vector<std::size_t> reactions() const {
        std::vector<std::size_t> e = j_map;
        std::sort(e.begin(), e.end());
        return e;
    }
    bool operator==(const ChildSelection&) const = default;
    bool operator<(const ChildSelection& o) const {
        return std::make_tuple(kappa.size(), kappa, j_map) < std::make_tuple(o.kappa.size(), o.kappa, o.j_map);
    }
};

struct CSMatrix {
    ChildSelection selection;
    RationalMatrix matrix;
};

struct FeedbackClassification {
    int det_sign = 0;
    bool is_positive_feedback_sign = false;
    bool is_minimal = false;
    bool is_metzler = false;
};

struct UnstableFeedback {
    ChildSelection selection;
    RationalMatrix matrix;
    FeedbackClassification classification;
};

inline int positive_feedback_sign(std::size_t k) { return k % 2 == 1 ? 1 : -1; }

inline bool is_valid_child_selection(const ReactionNetwork& net, const ChildSelection& sel) {
    if (sel.kappa.size() != sel.j_map.size()) return false;
    if (!std::is_sorted(sel.kappa.begin(), sel.kappa.end())) return false;
    if (std::adjacent_find(sel.kappa.begin(), sel.kappa.end()) != sel.kappa.end()) return false;
    auto e = sel.reactions();
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) return false;
    for (std::size_t i = 0; i < sel.size(); ++i) {
        if (sel.kappa[i] >= net.num_species() || sel.j_map[i] >= net.num_reactions()) return false;
        if (net.reactions[sel.j_map[i]].reactant_coeff(sel.kappa[i]) <= 0) return false;
    }
    return true;
}

namespace detail {

// consumers[m] = reactions having species m as a reactant, ascending.
inline std::vector<std::vector<std::size_t>> consumers_of(const ReactionNetwork& net) {
    std::vector<std::vector<std::size_t>> c(net.num_species());
    for (const auto& r : net.reactions)
        for (auto [m, coeff] : r.reactants)
            if (coeff > 0) c[m].push_back(r.id);
    return c;
}

inline void match_backtrack(const std::vector<std::vector<std::size_t>>& consumers, ChildSelection& sel,
                            std::vector<bool>& used, std::size_t pos,
                            const std::function<void(const ChildSelection&)>& fn) {
    if (pos == sel.kappa.size()) {
        fn(sel);
        return;
    }
    for (std::size_t j : consumers[sel.kappa[pos]]) {
        if (used[j]) continue;
        used[j] = true;
        sel.j_map[pos] = j;
        match_backtrack(consumers, sel, used, pos + 1, fn);
        used[j] = false;
    }
}

// All k-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > n) return out;
    std::vector<std::size_t> c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = i;
    for (;;) {
        out.push_back(c);
        std::size_t i = k;
        while (i > 0 && c[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++c[i - 1];
        for (std::size_t t = i; t < k; ++t) c[t] = c[t - 1] + 1;
    }
    return out;
}

}  // namespace detail

// Calls fn for every Child-Selection whose species set is exactly kappa.
inline void for_each_matching(const ReactionNetwork& net, const std::vector<std::size_t>& kappa,
                              const std::function<void(const ChildSelection&)>& fn,
                              const std::vector<std::vector<std::size_t>>* consumers = nullptr) {
    std::vector<std::vector<std::size_t>> local;
    if (!consumers) {
        local = detail::consumers_of(net);
        consumers = &local;
    }
    for (auto m : kappa)
        if ((*consumers)[m].empty()) return;
    ChildSelection sel{kappa, std::vector<std::size_t>(kappa.size())};
    std::vector<bool> used(net.num_reactions(), false);
    detail::match_backtrack(*consumers, sel, used, 0, fn);
}

inline void for_each_child_selection(const ReactionNetwork& net, std::size_t k,
                                     const std::function<void(const ChildSelection&)>& fn) {
    if (k == 0 || k > net.num_species() || k > net.num_reactions()) return;
    auto consumers = detail::consumers_of(net);
    for (const auto& kappa : detail::combinations(net.num_species(), k)) for_each_matching(net, kappa, fn, &consumers);
}

inline std::vector<ChildSelection> enumerate_child_selections(const ReactionNetwork& net, std::size_t k) {
    std::vector<ChildSelection> out;
    for_each_child_selection(net, k, [&](const ChildSelection& s) { out.push_back(s); });
    return out;
}

inline CSMatrix cs_matrix(const ReactionNetwork& net, const ChildSelection& sel) {
    const auto s = stoichiometric_ints(net);
    const std::size_t k = sel.size();
    RationalMatrix m(k, k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) m(a, b) = s[sel.kappa[a]][sel.j_map[b]];
    return CSMatrix{sel, m};
}

inline bool is_metzler(const RationalMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j && m(i, j).sign() < 0) return false;
    return true;
}

namespace detail {

inline std::vector<long long> flat_ints(const RationalMatrix& m) {
    std::vector<long long> a;
    a.reserve(m.rows() * m.cols());
    for (const auto& row : m.to_int_rows()) a.insert(a.end(), row.begin(), row.end());
    return a;
}

inline int sign_ll(long long x) { return (x > 0) - (x < 0); }

// True if some nonempty proper principal submatrix has determinant sign
// (-1)^(k'-1).
inline bool has_smaller_positive_feedback(const std::vector<long long>& a, std::size_t k) {
    std::vector<long long> sub;
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << k); ++mask) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < k; ++i)
            if (mask >> i & 1) idx.push_back(i);
        const std::size_t kk = idx.size();
        sub.assign(kk * kk, 0);
        for (std::size_t r = 0; r < kk; ++r)
            for (std::size_t c = 0; c < kk; ++c) sub[r * kk + c] = a[idx[r] * k + idx[c]];
        if (sign_ll(det_int(sub, kk)) == positive_feedback_sign(kk)) return true;
    }
    return false;
}

}  // namespace detail

inline FeedbackClassification classify(const RationalMatrix& m) {
    FeedbackClassification c;
    const std::size_t k = m.rows();
    auto a = detail::flat_ints(m);
    c.det_sign = detail::sign_ll(det_int(a, k));
    c.is_positive_feedback_sign = k > 0 && c.det_sign == positive_feedback_sign(k);
    c.is_minimal = c.is_positive_feedback_sign && !detail::has_smaller_positive_feedback(a, k);
    c.is_metzler = is_metzler(m);
    return c;
}

inline FeedbackClassification classify(const CSMatrix& csm) { return classify(csm.matrix); }

inline void sort_feedbacks(std::vector<UnstableFeedback>& list) {
    std::sort(list.begin(), list.end(),
              [](const UnstableFeedback& a, const UnstableFeedback& b) { return a.selection < b.selection; });
}

// Minimal unstable-positive feedbacks by direct principal-submatrix scan.
inline std::vector<UnstableFeedback> find_unstable_positive_feedbacks(const ReactionNetwork& net,
                                                                      std::size_t jobs = 1) {
    const auto s = stoichiometric_ints(net);
    const auto consumers = detail::consumers_of(net);
    std::vector<std::vector<std::size_t>> tasks;
    const std::size_t kmax = std::min(net.num_species(), net.num_reactions());
    for (std::size_t k = 1; k <= kmax; ++k)
        for (auto& kappa : detail::combinations(net.num_species(), k)) tasks.push_back(std::move(kappa));
    std::vector<std::vector<UnstableFeedback>> found(tasks.size());
    parallel_for(tasks.size(), resolve_jobs(jobs), [&](std::size_t t, std::size_t) {
        const auto& kappa = tasks[t];
        const std::size_t k = kappa.size();
        for_each_matching(
            net, kappa,
            [&](const ChildSelection& sel) {
                std::vector<long long> a(k * k);
                for (std::size_t r = 0; r < k; ++r)
                    for (std::size_t c = 0; c < k; ++c) a[r * k + c] = s[sel.kappa[r]][sel.j_map[c]];
                if (detail::sign_ll(det_int(a, k)) != positive_feedback_sign(k)) return;
                if (detail::has_smaller_positive_feedback(a, k)) return;
                auto csm = cs_matrix(net, sel);
                found[t].push_back(UnstableFeedback{sel, csm.matrix, classify(csm.matrix)});
            },
            &consumers);
    });
    std::vector<UnstableFeedback> out;
    for (auto& f : found) out.insert(out.end(), f.begin(), f.end());
    sort_feedbacks(out);
    return out;
}

inline bool is_autocatalytic(const std::vector<UnstableFeedback>& upfs) {
    return std::any_of(upfs.begin(), upfs.end(),
                       [](const UnstableFeedback& f) { return f.classification.is_metzler; });
}

inline bool is_autocatalytic(const ReactionNetwork& net) {
    return is_autocatalytic(find_unstable_positive_feedbacks(net));
}

inline ChildSelection apply_symmetry(const ChildSelection& sel, const SymmetryInvolution& sym) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < sel.size(); ++i)
        pairs.emplace_back(sym.species_perm[sel.kappa[i]], sym.reaction_perm[sel.j_map[i]]);
    std::sort(pairs.begin(), pairs.end());
    ChildSelection out;
    for (auto [m, j] : pairs) {
        out.kappa.push_back(m);
        out.j_map.push_back(j);
    }
    return out;
}

// Groups feedbacks into orbits of the involution; each class lists indices
// into `upfs`, and classes are ordered by their smallest member.
inline std::vector<std::vector<std::size_t>> symmetry_classes(const std::vector<UnstableFeedback>& upfs,
                                                              const SymmetryInvolution& sym) {
    std::vector<std::vector<std::size_t>> classes;
    std::vector<bool> done(upfs.size(), false);
    for (std::size_t i = 0; i < upfs.size(); ++i) {
        if (done[i]) continue;
        done[i] = true;
        std::vector<std::size_t> cls{i};
        auto img = apply_symmetry(upfs[i].selection, sym);
        for (std::size_t j = i + 1; j < upfs.size(); ++j)
            if (!done[j] && upfs[j].selection == img) {
                done[j] = true;
                cls.push_back(j);
            }
        classes.push_back(cls);
    }
    return classes;
}

struct ElidedEntry {
    std::string reaction;
    std::string species;
    int coeff = 0;
    bool reactant = true;
};

struct InstabilityMotif {
    ReactionNetwork network;
    std::vector<bool> reactants_elided;
    std::vector<bool> products_elided;
    std::vector<ElidedEntry> elided;

    std::string to_dsl() const {
        std::string out;
        for (const auto& r : network.reactions) {
            auto side = [&](const std::map<std::size_t, int>& terms, bool elided_flag) {
                std::string s;
                for (auto [m, c] : terms) {
                    if (!s.empty()) s += " + ";
                    if (c != 1) s += std::to_string(c) + " ";
                    s += network.species[m].name;
                }
                if (elided_flag) s += s.empty() ? "..." : " + ...";
                return s.empty() ? std::string("0") : s;
            };
            out += side(r.reactants, reactants_elided[r.id]) + " -> " + side(r.products, products_elided[r.id]) +
                   " @ " + r.label + "\n";
        }
        return out;
    }
};

inline InstabilityMotif instability_motif(const ReactionNetwork& net, const ChildSelection& sel) {
    InstabilityMotif motif;
    std::vector<std::size_t> remap(net.num_species(), SIZE_MAX);
    for (auto m : sel.kappa) {
        remap[m] = motif.network.species.size();
        motif.network.species.push_back(Species{remap[m], net.species[m].name});
    }
    for (auto j : sel.reactions()) {
        const auto& src = net.reactions[j];
        Reaction r;
        r.id = motif.network.reactions.size();
        r.label = src.label;
        bool re = false, pe = false;
        for (auto [m, c] : src.reactants) {
            if (remap[m] != SIZE_MAX)
                r.reactants[remap[m]] = c;
            else {
                re = true;
                motif.elided.push_back(ElidedEntry{src.label, net.species[m].name, c, true});
            }
        }
        for (auto [m, c] : src.products) {
            if (remap[m] != SIZE_MAX)
                r.products[remap[m]] = c;
            else {
                pe = true;
                motif.elided.push_back(ElidedEntry{src.label, net.species[m].name, c, false});
            }
        }
        motif.network.reactions.push_back(std::move(r));
        motif.reactants_elided.push_back(re);
        motif.products_elided.push_back(pe);
    }
    return motif;
}

}  // namespace crn
