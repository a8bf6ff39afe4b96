#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace crn;

namespace {

ReactionNetwork model(const std::string& name, ParseOptions opts = {}) {
    return parse_network_file(std::string(CRN_MODELS_DIR) + "/" + name + ".crn", opts).network;
}

std::vector<std::string> corpus() {
    std::vector<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(CRN_MODELS_DIR))
        if (e.path().extension() == ".crn") names.push_back(e.path().stem().string());
    std::sort(names.begin(), names.end());
    return names;
}

}  // namespace

TEST(Dsl, SingleReaction) {
    auto p = parse_network("N1 + D2 -> NI1 + T2 @ 12");
    const auto& net = p.network;
    ASSERT_EQ(net.num_reactions(), 1u);
    const auto& r = net.reactions[0];
    EXPECT_EQ(r.label, "12");
    EXPECT_EQ(r.reactants, (std::map<std::size_t, int>{{net.require_species("N1"), 1}, {net.require_species("D2"), 1}}));
    EXPECT_EQ(r.products, (std::map<std::size_t, int>{{net.require_species("NI1"), 1}, {net.require_species("T2"), 1}}));
    EXPECT_TRUE(p.warnings.empty());
}

TEST(Dsl, IdentityReactionWarns) {
    auto p = parse_network("A -> A @ 1");
    ASSERT_EQ(p.network.num_reactions(), 1u);
    EXPECT_EQ(p.network.reactions[0].reactants, (std::map<std::size_t, int>{{0, 1}}));
    EXPECT_EQ(p.network.reactions[0].products, (std::map<std::size_t, int>{{0, 1}}));
    EXPECT_EQ(p.warnings.size(), 1u);
}

TEST(Dsl, ReversibleSplitsIntoTwoReactions) {
    auto net = parse_network("2 L1 + L2 <-> L1 + 2 L2 @ 1 @ 2").network;
    ASSERT_EQ(net.num_reactions(), 2u);
    EXPECT_EQ(net.reactions[0].label, "1");
    EXPECT_EQ(net.reactions[1].label, "2");
    EXPECT_EQ(net.reactions[0].reactants, net.reactions[1].products);
    EXPECT_EQ(net.reactions[0].products, net.reactions[1].reactants);
    EXPECT_EQ(net.reactions[0].reactant_coeff(net.require_species("L1")), 2);
}

TEST(Dsl, SpeciesInFirstAppearanceOrder) {
    auto net = parse_network("B + A -> C @ x\nC -> D + A @ y").network;
    std::vector<std::string> names;
    for (const auto& s : net.species) names.push_back(s.name);
    EXPECT_EQ(names, (std::vector<std::string>{"B", "A", "C", "D"}));
}

TEST(Dsl, InflowOutflowAndComments) {
    auto p = parse_network("# comment\n0 -> A @ in  # trailing\nA -> 0 @ out\n\n");
    EXPECT_EQ(p.network.num_reactions(), 2u);
    EXPECT_TRUE(p.network.reactions[0].reactants.empty());
    EXPECT_TRUE(p.network.reactions[1].products.empty());
    EXPECT_EQ(p.warnings.size(), 2u);
}

TEST(Dsl, ErrorsCarryPosition) {
    try {
        parse_network("A -> B @ 1\nA => B @ 2");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.column(), 3u);
    }
    EXPECT_THROW(parse_network("A -> B @ 1\nB -> A @ 1"), ParseError);
    EXPECT_THROW(parse_network("A -> B"), ParseError);
    EXPECT_THROW(parse_network("A <-> B @ 1"), ParseError);
    EXPECT_THROW(parse_network("A -> B @ 1 extra"), ParseError);
    EXPECT_THROW(parse_network("0 -> 0 @ 1"), ParseError);
}

TEST(Dsl, SymmetryBlockValidation) {
    const std::string base = "A1 -> B1 @ 1\nA2 -> B2 @ 2\n";
    auto ok = parse_network(base + "symmetry: A1 <-> A2, B1 <-> B2, 1 <-> 2").network;
    ASSERT_TRUE(ok.symmetry);
    EXPECT_EQ(ok.symmetry->species_perm, (std::vector<std::size_t>{2, 3, 0, 1}));
    EXPECT_EQ(ok.symmetry->reaction_perm, (std::vector<std::size_t>{1, 0}));
    // Missing the reaction swap breaks S-invariance.
    EXPECT_THROW(parse_network(base + "symmetry: A1 <-> A2, B1 <-> B2"), ParseError);
    EXPECT_THROW(parse_network(base + "symmetry: A1 <-> Q"), ParseError);
    EXPECT_THROW(parse_network(base + "symmetry: A1 <-> A2, A1 <-> B2"), ParseError);
    // Blocks may span several lines; an empty block is the identity.
    auto split = parse_network(base + "symmetry: A1 <-> A2, B1 <-> B2\nsymmetry: 1 <-> 2").network;
    EXPECT_EQ(split.symmetry, ok.symmetry);
    auto empty = parse_network(base + "symmetry:").network;
    ASSERT_TRUE(empty.symmetry);
    EXPECT_EQ(*empty.symmetry, SymmetryInvolution::identity(4, 2));
    ParseOptions ignore;
    ignore.ignore_symmetry = true;
    EXPECT_FALSE(parse_network(base + "symmetry: A1 <-> A2, B1 <-> B2, 1 <-> 2", ignore).network.symmetry);
}

TEST(Dsl, InferredSymmetry) {
    ParseOptions infer;
    infer.infer_symmetry = true;
    auto p = parse_network("A1 -> B1 @ x\nA2 -> B2 @ y\nC -> A1 + A2 @ z", infer);
    EXPECT_TRUE(p.symmetry_inferred);
    ASSERT_TRUE(p.network.symmetry);
    EXPECT_EQ(p.network.symmetry->reaction_perm, (std::vector<std::size_t>{1, 0, 2}));
    EXPECT_THROW(parse_network("A1 -> B1 @ x\nA2 -> C @ y", infer), ParseError);
}

TEST(Dsl, InferenceReproducesExplicitBlocksOnCorpus) {
    ParseOptions infer;
    infer.infer_symmetry = true;
    std::size_t inferred_count = 0;
    for (const auto& name : corpus()) {
        const auto explicit_net = model(name);
        ASSERT_TRUE(explicit_net.symmetry) << name;
        // Inference only runs without a block, so strip it first.
        std::string text = to_dsl(explicit_net);
        text = text.substr(0, text.find("symmetry:"));
        ReactionNetwork inferred;
        try {
            inferred = parse_network(text, infer).network;
        } catch (const ParseError&) {
            continue;  // names without the 1/2 convention
        }
        ASSERT_TRUE(inferred.symmetry) << name;
        EXPECT_TRUE(check_symmetry(explicit_net, *inferred.symmetry).valid) << name;
        ++inferred_count;
    }
    EXPECT_GE(inferred_count, 10u);
}

TEST(Dsl, RoundTripThroughText) {
    for (const auto& name : corpus()) {
        const auto net = model(name);
        const auto again = parse_network(to_dsl(net)).network;
        EXPECT_EQ(again, net) << name;
    }
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        auto net = oracle::random_network(rng, 5, 5, 2);
        // Drop reactions with empty sides on both ends; the parser rejects them.
        std::vector<Reaction> kept;
        for (auto r : net.reactions)
            if (!r.reactants.empty() || !r.products.empty()) {
                r.id = kept.size();
                kept.push_back(r);
            }
        net.reactions = kept;
        if (net.reactions.empty()) continue;
        const auto again = parse_network(to_dsl(net)).network;
        // Species order is first appearance, so compare stoichiometry by name.
        ASSERT_EQ(again.num_reactions(), net.num_reactions());
        for (std::size_t j = 0; j < net.num_reactions(); ++j)
            for (const auto& s : net.species) {
                auto idx = again.species_index(s.name);
                EXPECT_EQ(idx ? again.reactions[j].reactant_coeff(*idx) : 0, net.reactions[j].reactant_coeff(s.id));
                EXPECT_EQ(idx ? again.reactions[j].product_coeff(*idx) : 0, net.reactions[j].product_coeff(s.id));
            }
    }
}

TEST(Network, ReactantAndStoichiometricMatrices) {
    const auto frame = model("Frame1");
    // Rows in (X1, X2, Y) order.
    const std::vector<std::string> rows{"X1", "X2", "Y"};
    const RationalMatrix expected_reactants{{1, 0}, {0, 1}, {1, 0}};
    const RationalMatrix expected_s{{-1, 2}, {1, -1}, {-1, 0}};
    const auto r = reactant_matrix(frame);
    const auto s = stoichiometric_matrix(frame);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            EXPECT_EQ(r(frame.require_species(rows[i]), j), expected_reactants(i, j));
            EXPECT_EQ(s(frame.require_species(rows[i]), j), expected_s(i, j));
        }
    const auto mi = model("MI");
    EXPECT_EQ(reactant_matrix(mi), (RationalMatrix{{2, 1}, {1, 2}}));
    EXPECT_EQ(stoichiometric_matrix(mi), (RationalMatrix{{-1, 1}, {1, -1}}));
    const ReactionNetwork empty;
    EXPECT_EQ(reactant_matrix(empty).rows(), 0u);
    EXPECT_EQ(reactant_matrix(empty).cols(), 0u);
}

TEST(Network, StoichiometryIsProductMinusReactant) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 50; ++trial) {
        const auto net = oracle::random_network(rng, 6, 6, 2);
        EXPECT_EQ(stoichiometric_matrix(net), product_matrix(net) - reactant_matrix(net));
    }
}

TEST(Network, FreezeSpeciesDropsRows) {
    const auto net = model("MIII");
    const auto frozen = freeze_species(net, {"NI1", "NI2"});
    EXPECT_EQ(frozen.num_species(), 2u);
    EXPECT_EQ(frozen.num_reactions(), 2u);
    ASSERT_TRUE(frozen.symmetry);
    EXPECT_TRUE(check_symmetry(frozen, *frozen.symmetry).valid);
    EXPECT_THROW(freeze_species(net, {"NI1"}), NetworkError);
    EXPECT_THROW(freeze_species(net, {"nope"}), NetworkError);
}

TEST(Network, CorpusSymmetriesAreValidInvolutions) {
    for (const auto& name : corpus()) {
        const auto net = model(name);
        ASSERT_TRUE(net.symmetry) << name;
        EXPECT_TRUE(validate_symmetry(net).valid) << name;
    }
}
