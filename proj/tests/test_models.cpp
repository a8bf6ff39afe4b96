#include "oracles.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace crn;

namespace {

ReactionNetwork model(const std::string& name) {
    return parse_network_file(std::string(CRN_MODELS_DIR) + "/" + name + ".crn").network;
}

Polynomial sym(const SymbolTable& t, const std::string& name) {
    auto id = t.canonical_by_name(name);
    if (!id) throw std::invalid_argument("unknown symbol " + name);
    return Polynomial::symbol(*id);
}

RationalVector by_name(const ReactionNetwork& net, const std::map<std::string, int>& entries) {
    RationalVector v(net.num_species(), Rational(0));
    for (const auto& [name, c] : entries) v[net.require_species(name)] = c;
    return v;
}

std::size_t reaction_index(const ReactionNetwork& net, const std::string& label) {
    for (const auto& r : net.reactions)
        if (r.label == label) return r.id;
    throw std::invalid_argument("unknown reaction " + label);
}

// Stoichiometric submatrix with rows in the given species order and columns
// in the given reaction order.
RationalMatrix block(const ReactionNetwork& net, const std::vector<std::string>& species,
                     const std::vector<std::string>& reactions) {
    const auto s = stoichiometric_matrix(net);
    RationalMatrix out(species.size(), reactions.size());
    for (std::size_t i = 0; i < species.size(); ++i)
        for (std::size_t j = 0; j < reactions.size(); ++j)
            out(i, j) = s(net.require_species(species[i]), reaction_index(net, reactions[j]));
    return out;
}

struct Feedback {
    std::vector<std::string> species;
    std::vector<std::string> reactions;
    RationalMatrix matrix;
};

// Finds the reported feedback with the same species-to-reaction map and
// returns its matrix permuted into the order of `f`.
std::optional<RationalMatrix> reported_in_order(const ReactionNetwork& net, const std::vector<UnstableFeedback>& upfs,
                                                const Feedback& f) {
    std::map<std::size_t, std::size_t> want;
    for (std::size_t i = 0; i < f.species.size(); ++i)
        want[net.require_species(f.species[i])] = reaction_index(net, f.reactions[i]);
    for (const auto& u : upfs) {
        std::map<std::size_t, std::size_t> got;
        for (std::size_t i = 0; i < u.selection.size(); ++i) got[u.selection.kappa[i]] = u.selection.j_map[i];
        if (got != want) continue;
        std::vector<std::size_t> p;
        for (const auto& name : f.species) {
            const auto m = net.require_species(name);
            p.push_back(static_cast<std::size_t>(std::find(u.selection.kappa.begin(), u.selection.kappa.end(), m) -
                                                 u.selection.kappa.begin()));
        }
        return u.matrix.submatrix(p, p);
    }
    return std::nullopt;
}

void expect_span(const ReactionNetwork& net, const std::vector<std::map<std::string, int>>& laws) {
    std::vector<RationalVector> expected;
    for (const auto& w : laws) expected.push_back(by_name(net, w));
    const auto s = stoichiometric_matrix(net);
    for (const auto& w : expected) EXPECT_TRUE(is_zero_vector(s.transpose() * w));
    const auto basis = left_kernel_basis(s);
    EXPECT_EQ(basis.dimension(), laws.size());
    EXPECT_TRUE(same_span(basis.vectors, expected, net.num_species()));
}

}  // namespace

TEST(CentralModel, StoichiometryAndConservation) {
    const auto net = model("BI");
    const RationalMatrix s{{-1, 0, 1, 0, 0, 0}, {-1, 1, 0, 0, 0, 0}, {1, -1, 0, 0, 0, 0},  {0, 0, 1, 0, -1, 0},
                           {0, 0, -1, 0, 1, 0}, {0, 0, 0, -1, 0, 1}, {0, 0, 0, -1, 1, 0},  {0, 0, 0, 1, -1, 0},
                           {0, -1, 0, 0, 0, 1}, {0, 1, 0, 0, 0, -1}};
    EXPECT_EQ(block(net, {"NE1", "NI1", "N1", "D1", "T1", "NE2", "NI2", "N2", "D2", "T2"},
                    {"11", "12", "13", "21", "22", "23"}),
              s);
    expect_span(net, {{{"NI1", 1}, {"N1", 1}},
                      {{"D1", 1}, {"T1", 1}},
                      {{"NE1", 1}, {"N1", 1}, {"T1", 1}, {"NE2", 1}, {"N2", 1}, {"T2", 1}},
                      {{"NI2", 1}, {"N2", 1}},
                      {{"D2", 1}, {"T2", 1}}});
}

TEST(CisModel, SixFeedbacksMatchReferenceMatrices) {
    const auto net = model("BI_BII");
    const auto upfs = find_unstable_positive_feedbacks(net);
    ASSERT_EQ(upfs.size(), 6u);
    const std::vector<Feedback> reference = {
        {{"NI1", "N1", "D1", "N2", "D2"},
         {"11", "12", "14", "22", "24"},
         {{-1, 1, 0, 0, 0}, {1, -1, -1, 0, 0}, {0, 0, -1, -1, 0}, {0, 0, 0, -1, -1}, {0, -1, 0, 0, -1}}},
        {{"N1", "D1", "NI2", "N2", "D2"},
         {"12", "14", "21", "22", "24"},
         {{-1, -1, 0, 0, 0}, {0, -1, 0, -1, 0}, {0, 0, -1, 1, 0}, {0, 0, 1, -1, -1}, {-1, 0, 0, 0, -1}}},
        {{"N1", "D1", "T1", "N2", "D2"},
         {"14", "22", "13", "24", "12"},
         {{-1, 0, 0, 0, -1}, {-1, -1, 1, 0, 0}, {0, 1, -1, 0, 0}, {0, -1, 0, -1, 0}, {0, 0, 0, -1, -1}}},
        {{"N1", "D1", "N2", "D2", "T2"},
         {"14", "22", "24", "12", "23"},
         {{-1, 0, 0, -1, 0}, {-1, -1, 0, 0, 0}, {0, -1, -1, 0, 0}, {0, 0, -1, -1, 1}, {0, 0, 0, 1, -1}}},
        {{"NI1", "N1", "D1", "NE2", "N2", "T2"},
         {"11", "12", "14", "21", "22", "23"},
         {{-1, 1, 0, 0, 0, 0},
          {1, -1, -1, 0, 0, 0},
          {0, 0, -1, 0, -1, 0},
          {0, 0, 0, -1, 0, 1},
          {0, 0, 0, 1, -1, 0},
          {0, 1, 0, 0, 0, -1}}},
        {{"NE1", "N1", "T1", "NI2", "N2", "D2"},
         {"11", "12", "13", "21", "22", "24"},
         {{-1, 0, 1, 0, 0, 0},
          {1, -1, 0, 0, 0, 0},
          {0, 0, -1, 0, 1, 0},
          {0, 0, 0, -1, 1, 0},
          {0, 0, 0, 1, -1, -1},
          {0, -1, 0, 0, 0, -1}}},
    };
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const auto& f = reference[i];
        EXPECT_EQ(block(net, f.species, f.reactions), f.matrix) << "kappa " << i + 1;
        const auto got = reported_in_order(net, upfs, f);
        ASSERT_TRUE(got) << "kappa " << i + 1;
        EXPECT_EQ(*got, f.matrix) << "kappa " << i + 1;
        EXPECT_FALSE(is_metzler(f.matrix));
    }
    EXPECT_EQ(symmetry_classes(upfs, *net.symmetry).size(), 3u);
}

TEST(CisModel, TopCoefficientMatchesReferenceFactorization) {
    const auto net = model("BI_BII");
    const auto cp = char_poly_coefficients(net);
    const auto& t = cp.symbols;
    const auto ne = sym(t, "r_{11,NE1}"), ni = sym(t, "r_{11,NI1}"), n2 = sym(t, "r_{12,N1}"),
               d2 = sym(t, "r_{12,D2}"), t3 = sym(t, "r_{13,T1}"), n4 = sym(t, "r_{14,N1}"), d4 = sym(t, "r_{14,D1}"),
               c5 = sym(t, "r_{15,C1}");
    const auto first = 2 * (t3 * ne) * (d2 * n4 + d4 * n2 + c5 * n2);
    const auto second = d4 * n2 * t3 - d2 * n4 * t3 + c5 * n2 * t3 + d2 * c5 * ne + d2 * c5 * ni + c5 * n2 * ne +
                        d2 * n4 * ni - d4 * n2 * ni + d4 * t3 * ne + c5 * t3 * ne + d4 * t3 * ni + c5 * t3 * ni +
                        n4 * t3 * ne + n4 * t3 * ni;
    // Reference coefficients belong to det(lambda I - G): a_k = (-1)^k E_k.
    EXPECT_EQ(-t.quotient(cp.principal_sums[7]), first * second);
    EXPECT_TRUE(cp.coefficients[7].has_mixed_signs());
}

TEST(LigandActivation, ConservationAndFlux) {
    const auto net = model("BIII");
    expect_span(net, {{{"Ds1", 1}, {"D1", 1}, {"T1", 1}, {"B1", 1}},
                      {{"NI1", 1}, {"N1", 1}, {"B2", 1}},
                      {{"NE1", 1}, {"N1", 1}, {"T1", 1}, {"B1", 1}, {"NE2", 1}, {"N2", 1}, {"T2", 1}, {"B2", 1}},
                      {{"Ds2", 1}, {"D2", 1}, {"T2", 1}, {"B2", 1}},
                      {{"B1", 1}, {"NI2", 1}, {"N2", 1}}});
    // v = (k,k,h,h,k,k,k,k,l,l,k,k) over reactions 11,12,16,17,18,19,21,22,26,27,28,29.
    const std::vector<std::string> order = {"11", "12", "16", "17", "18", "19", "21", "22", "26", "27", "28", "29"};
    const std::vector<int> pattern = {0, 0, 1, 1, 0, 0, 0, 0, 2, 2, 0, 0};
    std::vector<RationalVector> cone(3, RationalVector(net.num_reactions(), Rational(0)));
    for (std::size_t i = 0; i < order.size(); ++i) cone[pattern[i]][reaction_index(net, order[i])] = 1;
    EXPECT_TRUE(same_span(right_kernel_basis(stoichiometric_matrix(net)), cone, net.num_reactions()));
}

TEST(LigandActivation, TwoFeedbacksAndNondegeneracyExample) {
    const auto net = model("BIII");
    const auto upfs = find_unstable_positive_feedbacks(net);
    ASSERT_EQ(upfs.size(), 2u);
    const std::vector<Feedback> reference = {
        {{"Ds1", "D1", "T1", "N2"},
         {"18", "22", "19", "26"},
         {{-1, 0, 1, -1}, {1, -1, 0, 0}, {0, 1, -1, 0}, {0, -1, 0, -1}}},
        {{"N1", "Ds2", "D2", "T2"},
         {"16", "28", "12", "29"},
         {{-1, 0, -1, 0}, {-1, -1, 0, 1}, {0, 1, -1, 0}, {0, 0, 1, -1}}},
    };
    for (const auto& f : reference) {
        EXPECT_EQ(block(net, f.species, f.reactions), f.matrix);
        const auto got = reported_in_order(net, upfs, f);
        ASSERT_TRUE(got);
        EXPECT_EQ(*got, f.matrix);
        EXPECT_FALSE(is_metzler(f.matrix));
    }
    EXPECT_EQ(symmetry_classes(upfs, *net.symmetry).size(), 1u);

    const std::vector<std::string> species = {"NE1", "N1", "Ds1", "T1", "B1", "N2", "Ds2", "T2", "B2"};
    const std::vector<std::string> j = {"11", "12", "18", "19", "27", "22", "28", "29", "17"};
    ChildSelection sel;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < species.size(); ++i)
        pairs.emplace_back(net.require_species(species[i]), reaction_index(net, j[i]));
    std::sort(pairs.begin(), pairs.end());
    for (auto [m, r] : pairs) {
        sel.kappa.push_back(m);
        sel.j_map.push_back(r);
    }
    ASSERT_TRUE(is_valid_child_selection(net, sel));
    // det(lambda I - S[kappa]) = (lambda + 1)^9.
    const auto c = characteristic_polynomial(cs_matrix(net, sel).matrix);
    Rational binom = 1;
    for (std::size_t i = 0; i <= 9; ++i) {
        EXPECT_EQ(c[i], binom) << i;
        binom = binom * Rational(static_cast<long long>(9 - i)) / Rational(static_cast<long long>(i + 1));
    }
}

TEST(LigandActivation, TopCoefficientMatchesReferenceFactorization) {
    const auto net = model("BIII");
    const auto cp = char_poly_coefficients(net);
    const auto& t = cp.symbols;
    const auto ne = sym(t, "r_{11,NE1}"), ni = sym(t, "r_{11,NI1}"), n2 = sym(t, "r_{12,N1}"),
               d2 = sym(t, "r_{12,D2}"), n6 = sym(t, "r_{16,N1}"), ds6 = sym(t, "r_{16,Ds2}"),
               b7 = sym(t, "r_{17,B2}"), ds8 = sym(t, "r_{18,Ds1}"), t9 = sym(t, "r_{19,T1}");
    const auto first = 2 * (t9 * ne * ds8) * (b7 * n2 - d2 * n6);
    const auto second = d2 * b7 * t9 * ne + d2 * b7 * t9 * ni + d2 * n6 * t9 * ne + d2 * n6 * t9 * ni -
                        d2 * n6 * t9 * ds8 + d2 * b7 * ne * ds8 + d2 * b7 * ni * ds8 + b7 * n2 * ne * ds8 +
                        d2 * n6 * ni * ds8 + d2 * t9 * ne * ds6 + d2 * t9 * ni * ds6 + b7 * t9 * ne * ds8 +
                        b7 * t9 * ni * ds8 + n2 * t9 * ne * ds6 + n2 * t9 * ni * ds6 + b7 * n2 * t9 * ds8 +
                        n6 * t9 * ne * ds8 + n6 * t9 * ni * ds8;
    EXPECT_EQ(-t.quotient(cp.principal_sums[9]), first * second);
    // a_9 vanishes on r_{17,B2} r_{12,N1} = r_{12,D2} r_{16,N1}.
    std::mt19937_64 rng(71);
    std::uniform_int_distribution<int> num(1, 9), den(1, 4);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Rational> values(t.num_canonical());
        for (auto& v : values) v = Rational(num(rng), den(rng));
        const auto id = [&](const Polynomial& p) { return p.terms().begin()->first.front(); };
        values[id(b7)] = values[id(d2)] * values[id(n6)] / values[id(n2)];
        EXPECT_EQ(cp.coefficients[9].evaluate(values), Rational(0));
    }
}

TEST(NonAutonomousI, DeterminantIdentity) {
    for (int eta : {1, 2, 3}) {
        const auto net = model("NonAut_I_" + std::to_string(eta));
        const auto cp = char_poly_coefficients(net);
        const auto& t = cp.symbols;
        const auto d1 = sym(t, "r_{1,L1}"), d2 = sym(t, "r_{1,L2}");
        EXPECT_EQ(t.canonical_by_name("r_{2,L2}"), t.canonical_by_name("r_{1,L1}"));
        EXPECT_EQ(t.canonical_by_name("r_{2,L1}"), t.canonical_by_name("r_{1,L2}"));
        const long long f = eta * eta - 1;
        EXPECT_EQ(cp.principal_sums.size(), 3u);
        EXPECT_EQ(t.quotient(cp.principal_sums[2]), f * (d1 * d1 - d2 * d2)) << eta;
        const auto upfs = find_unstable_positive_feedbacks(net);
        if (eta == 1) {
            EXPECT_TRUE(cp.coefficients[2].is_zero());
            continue;
        }
        ASSERT_EQ(upfs.size(), 1u) << eta;
        const Feedback motif{{"L1", "L2"}, {"2", "1"}, {{-1, -eta}, {-eta, -1}}};
        const auto got = reported_in_order(net, upfs, motif);
        ASSERT_TRUE(got) << eta;
        EXPECT_EQ(*got, motif.matrix);
    }
}

TEST(NonAutonomousII, CharacteristicPolynomial) {
    const auto net = model("NonAut_II_1");
    EXPECT_EQ(stoichiometric_matrix(net), stoichiometric_matrix(model("NonAut_II_2")));
    const auto cp = char_poly_coefficients(net);
    const auto& t = cp.symbols;
    const auto a = sym(t, "r_{1,L1}"), b = sym(t, "r_{1,L2}"), c = sym(t, "r_{2,I2}");
    // det(lambda I - G) = lambda^4 - E_1 lambda^3 + E_2 lambda^2.
    EXPECT_EQ(-t.quotient(cp.principal_sums[1]), 2 * c + 2 * b);
    const auto corrected = (b + c) * (b + c) - a * a;
    EXPECT_EQ(t.quotient(cp.principal_sums[2]), corrected);
    EXPECT_TRUE(cp.coefficients[3].is_zero());
    EXPECT_TRUE(cp.coefficients[4].is_zero());
    // The reference lambda^2 coefficient carries 2 c a instead of 2 c b.
    const auto reference = c * c + 2 * c * a + b * b - a * a;
    EXPECT_NE(corrected, reference);
    EXPECT_EQ(corrected - reference, 2 * c * b - 2 * c * a);
    // b + c = a zeroes the corrected coefficient.
    std::vector<Rational> values(t.num_canonical(), Rational(1));
    const auto id = [&](const Polynomial& p) { return p.terms().begin()->first.front(); };
    values[id(b)] = Rational(2, 7);
    values[id(c)] = Rational(3, 5);
    values[id(a)] = values[id(b)] + values[id(c)];
    EXPECT_EQ(cp.coefficients[2].evaluate(values), Rational(0));

    const auto upfs = find_unstable_positive_feedbacks(net);
    ASSERT_EQ(upfs.size(), 1u);
    const Feedback motif{{"L1", "L2"}, {"1", "3"}, {{0, -1}, {-1, 0}}};
    const auto got = reported_in_order(net, upfs, motif);
    ASSERT_TRUE(got);
    EXPECT_EQ(*got, motif.matrix);
}

TEST(MinimalModels, FrozenTraceWitness) {
    const auto net = freeze_species(model("MIII"), {"NI1", "NI2"});
    const auto v = capacity_for_differentiation(net);
    ASSERT_EQ(v.status, CapacityStatus::Capable);
    ASSERT_TRUE(v.witness);
    const auto& t = v.charpoly.symbols;
    const auto g1 = *t.canonical_by_name("r_{1,L2}"), g2 = *t.canonical_by_name("r_{1,L1}");
    EXPECT_NEAR((*v.witness)[g1], (*v.witness)[g2], 1e-12);
}

TEST(ToyModel, FeedbackAndConsistency) {
    const auto net = model("Frame1");
    const auto v = capacity_for_differentiation(net);
    EXPECT_EQ(v.status, CapacityStatus::Inconsistent);
    const auto upfs = find_unstable_positive_feedbacks(net);
    ASSERT_EQ(upfs.size(), 1u);
    const Feedback motif{{"X1", "X2"}, {"1", "2"}, {{-1, 2}, {1, -1}}};
    const auto got = reported_in_order(net, upfs, motif);
    ASSERT_TRUE(got);
    EXPECT_EQ(*got, motif.matrix);
    EXPECT_TRUE(is_autocatalytic(upfs));
}
