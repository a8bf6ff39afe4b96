#pragma once

#include "crn/network.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crn {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line_(line),
          column_(column),
          detail_(msg) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& detail() const { return detail_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string detail_;
};

struct ParseOptions {
    bool infer_symmetry = false;
    bool ignore_symmetry = false;
};

struct ParsedNetwork {
    ReactionNetwork network;
    std::vector<std::string> warnings;
    bool symmetry_inferred = false;
};

namespace detail {

class LineScanner {
public:
    LineScanner(const std::string& text, std::size_t line) : s_(text), line_(line) {}

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= s_.size();
    }
    bool consume(const std::string& tok) {
        skip_ws();
        if (s_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }
    bool peek(const std::string& tok) {
        skip_ws();
        return s_.compare(pos_, tok.size(), tok) == 0;
    }
    std::size_t column() const { return pos_ + 1; }
    std::size_t position() const { return pos_; }
    void seek(std::size_t pos) { pos_ = pos; }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, pos_ + 1, msg); }

    bool peek_digit() {
        skip_ws();
        return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
    }

    long long integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer");
        if (pos_ - start > 9) {
            pos_ = start;
            fail("stoichiometric coefficient too large");
        }
        return std::stoll(s_.substr(start, pos_ - start));
    }

    static bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.';
    }

    std::string name() {
        skip_ws();
        if (pos_ >= s_.size() || !name_start(s_[pos_])) fail("expected a species name");
        std::size_t start = pos_;
        while (pos_ < s_.size() && name_char(s_[pos_])) {
            if (s_[pos_] == '.' && s_.compare(pos_, 3, "...") == 0) break;
            ++pos_;
        }
        return s_.substr(start, pos_ - start);
    }

    // Reaction labels and symmetry pair entries: any run of characters other
    // than whitespace, '@', ',' and '<'.
    std::string label() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '@' &&
               s_[pos_] != ',' && s_[pos_] != '<')
            ++pos_;
        if (start == pos_) fail("expected a label");
        return s_.substr(start, pos_ - start);
    }

private:
    const std::string& s_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

struct SideTerm {
    std::string name;
    int coeff;
    std::size_t column;
};

struct Side {
    std::vector<SideTerm> terms;
    bool empty_marker = false;
    bool elided = false;
};

inline Side parse_side(LineScanner& sc) {
    Side side;
    sc.skip_ws();
    if (sc.peek("...")) {
        sc.consume("...");
        side.elided = true;
        if (!sc.peek("+")) return side;
        sc.consume("+");
    } else if (sc.peek_digit()) {
        const std::size_t start = sc.position();
        long long v = sc.integer();
        if (v == 0 && (sc.peek("->") || sc.peek("<->") || sc.peek("@") || sc.at_end())) {
            side.empty_marker = true;
            return side;
        }
        sc.seek(start);
    }
    for (;;) {
        sc.skip_ws();
        if (sc.peek("...")) {
            sc.consume("...");
            side.elided = true;
        } else {
            std::size_t col = sc.column();
            long long coeff = 1;
            if (sc.peek_digit()) {
                coeff = sc.integer();
                if (coeff <= 0) throw ParseError(0, col, "stoichiometric coefficient must be positive");
            }
            std::string nm = sc.name();
            side.terms.push_back(SideTerm{nm, static_cast<int>(coeff), col});
        }
        if (!sc.consume("+")) break;
    }
    return side;
}

inline std::string strip_comment(const std::string& line) {
    auto p = line.find('#');
    return p == std::string::npos ? line : line.substr(0, p);
}

// Swaps a trailing digit 1 <-> 2; returns empty when the name has no such digit.
inline std::string swap_trailing_digit(const std::string& name) {
    if (name.empty()) return {};
    char c = name.back();
    if (c != '1' && c != '2') return {};
    std::string out = name;
    out.back() = c == '1' ? '2' : '1';
    return out;
}

}  // namespace detail

// Pairs every reaction with the reaction whose species-permuted image has the
// same coefficients. Returns nullopt if some reaction has no image.
inline std::optional<std::vector<std::size_t>> induced_reaction_perm(const ReactionNetwork& net,
                                                                     const std::vector<std::size_t>& species_perm) {
    std::vector<std::size_t> perm(net.num_reactions(), SIZE_MAX);
    std::vector<bool> used(net.num_reactions(), false);
    auto image_matches = [&](const Reaction& r, const Reaction& t) {
        if (r.reactants.size() != t.reactants.size() || r.products.size() != t.products.size()) return false;
        for (auto [m, c] : r.reactants)
            if (t.reactant_coeff(species_perm[m]) != c) return false;
        for (auto [m, c] : r.products)
            if (t.product_coeff(species_perm[m]) != c) return false;
        return true;
    };
    for (const auto& r : net.reactions) {
        if (perm[r.id] != SIZE_MAX) continue;
        for (const auto& t : net.reactions) {
            if (used[t.id] && t.id != r.id) continue;
            if (!image_matches(r, t)) continue;
            if (t.id != r.id && !image_matches(t, r)) continue;
            perm[r.id] = t.id;
            perm[t.id] = r.id;
            used[r.id] = used[t.id] = true;
            break;
        }
        if (perm[r.id] == SIZE_MAX) return std::nullopt;
    }
    return perm;
}

inline std::optional<SymmetryInvolution> infer_symmetry(const ReactionNetwork& net) {
    SymmetryInvolution s;
    for (const auto& sp : net.species) {
        std::string partner = detail::swap_trailing_digit(sp.name);
        auto idx = partner.empty() ? std::nullopt : net.species_index(partner);
        s.species_perm.push_back(idx ? *idx : sp.id);
    }
    auto rp = induced_reaction_perm(net, s.species_perm);
    if (!rp) return std::nullopt;
    s.reaction_perm = *rp;
    if (!check_symmetry(net, s).valid) return std::nullopt;
    return s;
}

inline ParsedNetwork parse_network(const std::string& text, const ParseOptions& opts = {}) {
    ParsedNetwork out;
    ReactionNetwork& net = out.network;
    struct PendingPair {
        std::string a, b;
        std::size_t line, col_a, col_b;
    };
    std::vector<PendingPair> pairs;
    bool has_symmetry_block = false;

    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    auto add_reaction = [&](const detail::Side& lhs, const detail::Side& rhs, const std::string& label,
                            std::size_t line, std::size_t label_col) {
        if (net.reaction_index(label)) throw ParseError(line, label_col, "duplicate reaction label '" + label + "'");
        Reaction r;
        r.id = net.reactions.size();
        r.label = label;
        for (const auto& t : lhs.terms) r.reactants[net.intern_species(t.name)] += t.coeff;
        for (const auto& t : rhs.terms) r.products[net.intern_species(t.name)] += t.coeff;
        if (r.reactants.empty() && r.products.empty())
            throw ParseError(line, 1, "reaction '" + label + "' has no species on either side");
        for (auto [m, c] : r.reactants)
            if (r.products.count(m))
                out.warnings.push_back("line " + std::to_string(line) + ": species " + net.species[m].name +
                                       " is both reactant and product of reaction " + label);
        if (r.reactants.empty())
            out.warnings.push_back("line " + std::to_string(line) + ": reaction " + label + " is an inflow");
        if (r.products.empty() && !rhs.elided)
            out.warnings.push_back("line " + std::to_string(line) + ": reaction " + label + " is an outflow");
        net.reactions.push_back(std::move(r));
    };

    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string line = detail::strip_comment(raw);
        detail::LineScanner sc(line, lineno);
        if (sc.at_end()) continue;
        if (sc.consume("symmetry:")) {
            has_symmetry_block = true;
            if (sc.at_end()) continue;
            for (;;) {
                std::size_t ca = sc.column() + 0;
                sc.skip_ws();
                ca = sc.column();
                std::string a = sc.label();
                if (!sc.consume("<->")) sc.fail("expected '<->' in symmetry pair");
                sc.skip_ws();
                std::size_t cb = sc.column();
                std::string b = sc.label();
                pairs.push_back(PendingPair{a, b, lineno, ca, cb});
                if (sc.at_end()) break;
                if (!sc.consume(",")) sc.fail("expected ',' between symmetry pairs");
            }
            continue;
        }
        detail::Side lhs;
        try {
            lhs = detail::parse_side(sc);
        } catch (const ParseError& e) {
            throw ParseError(lineno, e.column(), e.detail());
        }
        bool reversible = false;
        if (sc.consume("<->"))
            reversible = true;
        else if (!sc.consume("->"))
            sc.fail("expected '->' or '<->'");
        detail::Side rhs;
        try {
            rhs = detail::parse_side(sc);
        } catch (const ParseError& e) {
            throw ParseError(lineno, e.column(), e.detail());
        }
        if (!sc.consume("@")) sc.fail("expected '@' followed by a reaction label");
        sc.skip_ws();
        std::size_t c1 = sc.column();
        std::string l1 = sc.label();
        if (reversible) {
            if (!sc.consume("@")) sc.fail("reversible reaction needs a second '@' label");
            sc.skip_ws();
            std::size_t c2 = sc.column();
            std::string l2 = sc.label();
            if (!sc.at_end()) sc.fail("unexpected trailing text");
            if (l1 == l2) throw ParseError(lineno, c2, "duplicate reaction label '" + l2 + "'");
            add_reaction(lhs, rhs, l1, lineno, c1);
            add_reaction(rhs, lhs, l2, lineno, c2);
        } else {
            if (!sc.at_end()) sc.fail("unexpected trailing text");
            add_reaction(lhs, rhs, l1, lineno, c1);
        }
    }

    if (has_symmetry_block && !opts.ignore_symmetry) {
        SymmetryInvolution s = SymmetryInvolution::identity(net.num_species(), net.num_reactions());
        std::vector<bool> sp_set(net.num_species(), false), rx_set(net.num_reactions(), false);
        for (const auto& p : pairs) {
            auto sa = net.species_index(p.a);
            auto sb = net.species_index(p.b);
            if (sa || sb) {
                if (!sa) throw ParseError(p.line, p.col_a, "unknown species '" + p.a + "' in symmetry block");
                if (!sb) throw ParseError(p.line, p.col_b, "unknown species '" + p.b + "' in symmetry block");
                if ((sp_set[*sa] && s.species_perm[*sa] != *sb) || (sp_set[*sb] && s.species_perm[*sb] != *sa))
                    throw ParseError(p.line, p.col_a, "species paired more than once in symmetry block");
                s.species_perm[*sa] = *sb;
                s.species_perm[*sb] = *sa;
                sp_set[*sa] = sp_set[*sb] = true;
                continue;
            }
            auto ra = net.reaction_index(p.a);
            auto rb = net.reaction_index(p.b);
            if (!ra) throw ParseError(p.line, p.col_a, "unknown species or reaction '" + p.a + "' in symmetry block");
            if (!rb) throw ParseError(p.line, p.col_b, "unknown species or reaction '" + p.b + "' in symmetry block");
            if ((rx_set[*ra] && s.reaction_perm[*ra] != *rb) || (rx_set[*rb] && s.reaction_perm[*rb] != *ra))
                throw ParseError(p.line, p.col_a, "reaction paired more than once in symmetry block");
            s.reaction_perm[*ra] = *rb;
            s.reaction_perm[*rb] = *ra;
            rx_set[*ra] = rx_set[*rb] = true;
        }
        auto rep = check_symmetry(net, s);
        if (!rep.valid) {
            std::size_t line = pairs.empty() ? 1 : pairs.front().line;
            throw ParseError(line, 1, "invalid symmetry block: " + rep.errors.front());
        }
        net.symmetry = s;
    } else if (opts.infer_symmetry && !opts.ignore_symmetry) {
        auto s = infer_symmetry(net);
        if (!s) throw ParseError(lineno == 0 ? 1 : lineno, 1, "inferred symmetry fails validation");
        net.symmetry = *s;
        out.symmetry_inferred = true;
    }
    return out;
}

inline ParsedNetwork parse_network_file(const std::string& path, const ParseOptions& opts = {}) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_network(ss.str(), opts);
}

namespace detail {

inline std::string side_to_dsl(const ReactionNetwork& net, const std::map<std::size_t, int>& side, bool elided) {
    std::string out;
    for (auto [m, c] : side) {
        if (!out.empty()) out += " + ";
        if (c != 1) out += std::to_string(c) + " ";
        out += net.species[m].name;
    }
    if (elided) out += out.empty() ? "..." : " + ...";
    if (out.empty()) out = "0";
    return out;
}

}  // namespace detail

inline std::string reaction_to_dsl(const ReactionNetwork& net, const Reaction& r, bool lhs_elided = false,
                                   bool rhs_elided = false) {
    return detail::side_to_dsl(net, r.reactants, lhs_elided) + " -> " +
           detail::side_to_dsl(net, r.products, rhs_elided) + " @ " + r.label;
}

inline std::string to_dsl(const ReactionNetwork& net) {
    std::string out;
    for (const auto& r : net.reactions) out += reaction_to_dsl(net, r) + "\n";
    if (net.symmetry) {
        std::vector<std::string> items;
        for (std::size_t i = 0; i < net.num_species(); ++i)
            if (net.symmetry->species_perm[i] > i)
                items.push_back(net.species[i].name + " <-> " + net.species[net.symmetry->species_perm[i]].name);
        for (std::size_t j = 0; j < net.num_reactions(); ++j)
            if (net.symmetry->reaction_perm[j] > j)
                items.push_back(net.reactions[j].label + " <-> " + net.reactions[net.symmetry->reaction_perm[j]].label);
        out += "symmetry:";
        for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : " ") + items[i];
        out += "\n";
    }
    return out;
}

}  // namespace crn
