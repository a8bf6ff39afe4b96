#pragma once

#include "crn/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace crn {

struct Species {
    std::size_t id = 0;
    std::string name;
};

struct Reaction {
    std::size_t id = 0;
    std::string label;
    std::map<std::size_t, int> reactants;
    std::map<std::size_t, int> products;

    int reactant_coeff(std::size_t m) const {
        auto it = reactants.find(m);
        return it == reactants.end() ? 0 : it->second;
    }
    int product_coeff(std::size_t m) const {
        auto it = products.find(m);
        return it == products.end() ? 0 : it->second;
    }
    bool operator==(const Reaction&) const = default;
};

struct SymmetryInvolution {
    std::vector<std::size_t> species_perm;
    std::vector<std::size_t> reaction_perm;

    static SymmetryInvolution identity(std::size_t species, std::size_t reactions) {
        SymmetryInvolution s;
        for (std::size_t i = 0; i < species; ++i) s.species_perm.push_back(i);
        for (std::size_t j = 0; j < reactions; ++j) s.reaction_perm.push_back(j);
        return s;
    }
    bool operator==(const SymmetryInvolution&) const = default;
};

class NetworkError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ReactionNetwork {
    std::vector<Species> species;
    std::vector<Reaction> reactions;
    std::optional<SymmetryInvolution> symmetry;

    std::size_t num_species() const { return species.size(); }
    std::size_t num_reactions() const { return reactions.size(); }

    std::optional<std::size_t> species_index(const std::string& name) const {
        for (const auto& s : species)
            if (s.name == name) return s.id;
        return std::nullopt;
    }
    std::optional<std::size_t> reaction_index(const std::string& label) const {
        for (const auto& r : reactions)
            if (r.label == label) return r.id;
        return std::nullopt;
    }
    std::size_t require_species(const std::string& name) const {
        if (auto i = species_index(name)) return *i;
        throw NetworkError("unknown species '" + name + "'");
    }
    std::size_t require_reaction(const std::string& label) const {
        if (auto i = reaction_index(label)) return *i;
        throw NetworkError("unknown reaction '" + label + "'");
    }

    // Appends a species if absent and returns its id.
    std::size_t intern_species(const std::string& name) {
        if (auto i = species_index(name)) return *i;
        species.push_back(Species{species.size(), name});
        return species.size() - 1;
    }

    bool operator==(const ReactionNetwork& o) const {
        if (species.size() != o.species.size() || reactions != o.reactions || symmetry != o.symmetry) return false;
        for (std::size_t i = 0; i < species.size(); ++i)
            if (species[i].name != o.species[i].name || species[i].id != o.species[i].id) return false;
        return true;
    }
};

inline RationalMatrix reactant_matrix(const ReactionNetwork& net) {
    RationalMatrix m(net.num_species(), net.num_reactions());
    for (const auto& r : net.reactions)
        for (auto [s, c] : r.reactants) m(s, r.id) = c;
    return m;
}

inline RationalMatrix product_matrix(const ReactionNetwork& net) {
    RationalMatrix m(net.num_species(), net.num_reactions());
    for (const auto& r : net.reactions)
        for (auto [s, c] : r.products) m(s, r.id) = c;
    return m;
}

inline RationalMatrix stoichiometric_matrix(const ReactionNetwork& net) {
    RationalMatrix m(net.num_species(), net.num_reactions());
    for (const auto& r : net.reactions) {
        for (auto [s, c] : r.products) m(s, r.id) += c;
        for (auto [s, c] : r.reactants) m(s, r.id) -= c;
    }
    return m;
}

// Integer stoichiometric matrix, row-major |M| x |E|.
inline std::vector<std::vector<int>> stoichiometric_ints(const ReactionNetwork& net) {
    std::vector<std::vector<int>> s(net.num_species(), std::vector<int>(net.num_reactions(), 0));
    for (const auto& r : net.reactions) {
        for (auto [m, c] : r.products) s[m][r.id] += c;
        for (auto [m, c] : r.reactants) s[m][r.id] -= c;
    }
    return s;
}

struct SymmetryReport {
    bool valid = false;
    std::vector<std::string> errors;
    std::vector<std::string> fixed_species;
    std::vector<std::string> fixed_reactions;
    std::vector<std::pair<std::string, std::string>> species_pairs;
    std::vector<std::pair<std::string, std::string>> reaction_pairs;
};

inline SymmetryReport check_symmetry(const ReactionNetwork& net, const SymmetryInvolution& sym) {
    SymmetryReport rep;
    const std::size_t nm = net.num_species();
    const std::size_t ne = net.num_reactions();
    if (sym.species_perm.size() != nm || sym.reaction_perm.size() != ne) {
        rep.errors.push_back("permutation sizes do not match the network");
        return rep;
    }
    auto check_perm = [&](const std::vector<std::size_t>& p, const char* what) {
        std::vector<bool> seen(p.size(), false);
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] >= p.size() || seen[p[i]]) {
                rep.errors.push_back(std::string(what) + " map is not a permutation");
                return false;
            }
            seen[p[i]] = true;
        }
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[p[i]] != i) {
                rep.errors.push_back(std::string(what) + " permutation is not an involution");
                return false;
            }
        return true;
    };
    bool ok = check_perm(sym.species_perm, "species");
    ok = check_perm(sym.reaction_perm, "reaction") && ok;
    if (!ok) return rep;
    for (const auto& r : net.reactions) {
        const auto& img = net.reactions[sym.reaction_perm[r.id]];
        bool same = r.reactants.size() == img.reactants.size() && r.products.size() == img.products.size();
        if (same) {
            for (auto [m, c] : r.reactants)
                if (img.reactant_coeff(sym.species_perm[m]) != c) same = false;
            for (auto [m, c] : r.products)
                if (img.product_coeff(sym.species_perm[m]) != c) same = false;
        }
        if (!same)
            rep.errors.push_back("reaction " + r.label + " is not mapped onto reaction " + img.label +
                                 " with identical coefficients");
    }
    for (std::size_t i = 0; i < nm; ++i) {
        if (sym.species_perm[i] == i)
            rep.fixed_species.push_back(net.species[i].name);
        else if (sym.species_perm[i] > i)
            rep.species_pairs.emplace_back(net.species[i].name, net.species[sym.species_perm[i]].name);
    }
    for (std::size_t j = 0; j < ne; ++j) {
        if (sym.reaction_perm[j] == j)
            rep.fixed_reactions.push_back(net.reactions[j].label);
        else if (sym.reaction_perm[j] > j)
            rep.reaction_pairs.emplace_back(net.reactions[j].label, net.reactions[sym.reaction_perm[j]].label);
    }
    rep.valid = rep.errors.empty();
    return rep;
}

inline SymmetryReport validate_symmetry(const ReactionNetwork& net) {
    if (!net.symmetry) throw NetworkError("network has no symmetry involution");
    return check_symmetry(net, *net.symmetry);
}

// Copy of the network with the named species removed from every reaction.
// Used to freeze catalytic species whose concentrations are constant.
inline ReactionNetwork freeze_species(const ReactionNetwork& net, const std::set<std::string>& frozen) {
    if (frozen.empty()) return net;
    std::vector<std::size_t> remap(net.num_species(), SIZE_MAX);
    ReactionNetwork out;
    for (const auto& name : frozen) net.require_species(name);
    for (const auto& s : net.species) {
        if (frozen.count(s.name)) continue;
        remap[s.id] = out.species.size();
        out.species.push_back(Species{out.species.size(), s.name});
    }
    for (const auto& r : net.reactions) {
        Reaction q;
        q.id = r.id;
        q.label = r.label;
        for (auto [m, c] : r.reactants)
            if (remap[m] != SIZE_MAX) q.reactants[remap[m]] = c;
        for (auto [m, c] : r.products)
            if (remap[m] != SIZE_MAX) q.products[remap[m]] = c;
        out.reactions.push_back(std::move(q));
    }
    if (net.symmetry) {
        SymmetryInvolution s;
        for (const auto& sp : net.species) {
            if (remap[sp.id] == SIZE_MAX) continue;
            const std::size_t img = net.symmetry->species_perm[sp.id];
            if (remap[img] == SIZE_MAX) throw NetworkError("frozen species set is not closed under the symmetry");
            s.species_perm.push_back(remap[img]);
        }
        s.reaction_perm = net.symmetry->reaction_perm;
        out.symmetry = s;
    }
    return out;
}

}  // namespace crn
