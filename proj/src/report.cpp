#include "report.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

namespace crncap {

namespace {

Json integer_vector(const crn::RationalVector& v) {
    Json out = Json::array();
    for (const auto& q : crn::detail::make_primitive(v)) {
        const crn::Integer z = crn::numerator_of(q);
        if (z > std::numeric_limits<long long>::max() || z < std::numeric_limits<long long>::min())
            out.push_back(z.str());
        else
            out.push_back(z.convert_to<long long>());
    }
    return out;
}

Json int_matrix(const crn::RationalMatrix& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(crn::numerator_of(m(i, j)).convert_to<long long>());
        out.push_back(row);
    }
    return out;
}

std::string linear_expression(const crn::ReactionNetwork& net, const Json& coeffs) {
    std::string out;
    for (std::size_t m = 0; m < coeffs.size(); ++m) {
        const long long c = coeffs[m].get<long long>();
        if (c == 0) continue;
        const long long a = c < 0 ? -c : c;
        if (out.empty())
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        if (a != 1) out += std::to_string(a) + " ";
        out += net.species[m].name;
    }
    return out.empty() ? "0" : out;
}

Json monomial_json(const crn::Monomial& m, long long coeff, const std::function<std::string(crn::SymbolId)>& name) {
    Json symbols = Json::array();
    for (auto s : m) symbols.push_back(name(s));
    return Json{{"coef", coeff}, {"symbols", symbols}};
}

Json symmetry_json(const crn::ParsedNetwork& parsed) {
    const auto& net = parsed.network;
    if (!net.symmetry) return nullptr;
    const auto rep = crn::check_symmetry(net, *net.symmetry);
    Json sp = Json::array(), rp = Json::array();
    for (const auto& [a, b] : rep.species_pairs) sp.push_back({a, b});
    for (const auto& [a, b] : rep.reaction_pairs) rp.push_back({a, b});
    return Json{{"source", parsed.symmetry_inferred ? "inferred" : "explicit"},
                {"species_pairs", sp},
                {"reaction_pairs", rp},
                {"fixed_species", rep.fixed_species},
                {"fixed_reactions", rep.fixed_reactions}};
}

Json feedback_entry(const crn::ReactionNetwork& net, const crn::UnstableFeedback& f, std::size_t index,
                    std::size_t cls) {
    Json species = Json::array(), reactions = Json::array(), pairs = Json::array();
    for (auto m : f.selection.kappa) species.push_back(net.species[m].name);
    for (auto j : f.selection.reactions()) reactions.push_back(net.reactions[j].label);
    for (std::size_t a = 0; a < f.selection.kappa.size(); ++a)
        pairs.push_back(Json{{"species", net.species[f.selection.kappa[a]].name},
                             {"reaction", net.reactions[f.selection.j_map[a]].label}});
    const auto motif = crn::instability_motif(net, f.selection);
    Json elided = Json::array();
    for (const auto& e : motif.elided)
        elided.push_back(Json{{"reaction", e.reaction},
                              {"species", e.species},
                              {"coefficient", e.coeff},
                              {"side", e.reactant ? "reactant" : "product"}});
    return Json{{"index", index},
                {"size", f.selection.size()},
                {"species", species},
                {"reactions", reactions},
                {"child_selection", pairs},
                {"matrix", int_matrix(f.matrix)},
                {"det_sign", f.classification.det_sign},
                {"metzler", f.classification.is_metzler},
                {"minimal", f.classification.is_minimal},
                {"symmetry_class", cls},
                {"motif", Json{{"dsl", motif.to_dsl()}, {"elided", elided}}}};
}

Json spectrum_json(const std::vector<std::complex<double>>& ev) {
    Json out = Json::array();
    for (auto e : ev) out.push_back({e.real(), e.imag()});
    return out;
}

Json validation_json(const crn::ReactionNetwork& net, const crn::CapacityVerdict& verdict, std::uint64_t seed) {
    if (!verdict.flux) return Json{{"performed", false}, {"reason", "network is inconsistent"}};
    if (verdict.witness) {
        const auto w = crn::validate_witness(net, verdict);
        return Json{{"performed", true},
                    {"source", "witness"},
                    {"flux_error", w.flux_error},
                    {"jacobian_error", w.jacobian_error},
                    {"reduced_dimension", w.reduced_spectrum.size()},
                    {"reduced_spectrum", spectrum_json(w.reduced_spectrum)},
                    {"min_abs_eigenvalue", w.min_abs_eigenvalue},
                    {"zero_eigenvalue", w.zero_eigenvalue}};
    }
    // No witness: realize kinetics with random derivatives and report the spectrum.
    std::mt19937_64 rng(seed);
    const std::vector<double> xbar(net.num_species(), 1.0);
    const std::vector<double> v = crn::to_doubles(crn::symmetrized_flux(net, *verdict.flux));
    const crn::DenseMatrix rbar = crn::random_rbar(net, rng);
    const auto model = crn::realize_parameters(net, xbar, rbar, v);
    const auto check = crn::check_realization(model, xbar, rbar, v);
    const auto q = crn::image_basis(net, net.num_species() - verdict.conservation_dim);
    const auto ev = crn::eigenvalues(crn::reduced_jacobian(check.jacobian, q));
    double min_abs = std::numeric_limits<double>::infinity();
    for (auto e : ev) min_abs = std::min(min_abs, std::abs(e));
    Json out{{"performed", true},
             {"source", "random"},
             {"flux_error", check.flux_error},
             {"jacobian_error", check.jacobian_error},
             {"reduced_dimension", ev.size()},
             {"reduced_spectrum", spectrum_json(ev)}};
    out["min_abs_eigenvalue"] = ev.empty() ? Json(nullptr) : Json(min_abs);
    out["zero_eigenvalue"] = !ev.empty() && min_abs < crn::kZeroEigenvalueTolerance;
    return out;
}

std::string fmt_double(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

}  // namespace

SymmetryMode parse_symmetry_mode(const std::string& s) {
    if (s == "explicit") return SymmetryMode::Explicit;
    if (s == "infer") return SymmetryMode::Infer;
    if (s == "none") return SymmetryMode::None;
    throw std::invalid_argument("unknown symmetry mode '" + s + "'");
}

std::string to_string(SymmetryMode m) {
    switch (m) {
        case SymmetryMode::Explicit: return "explicit";
        case SymmetryMode::Infer: return "infer";
        case SymmetryMode::None: return "none";
    }
    return "explicit";
}

static crn::ParseOptions parse_options(SymmetryMode mode) {
    crn::ParseOptions po;
    po.infer_symmetry = mode == SymmetryMode::Infer;
    po.ignore_symmetry = mode == SymmetryMode::None;
    return po;
}

crn::ParsedNetwork load_network(const std::string& path, SymmetryMode mode) {
    if (!std::filesystem::is_regular_file(path)) throw std::invalid_argument("cannot open network file '" + path + "'");
    return crn::parse_network_file(path, parse_options(mode));
}

crn::ParsedNetwork load_network_text(const std::string& text, SymmetryMode mode) {
    return crn::parse_network(text, parse_options(mode));
}

Json polynomial_json(const crn::Polynomial& p, const std::function<std::string(crn::SymbolId)>& name) {
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms()) terms.push_back(monomial_json(m, c, name));
    return Json{{"text", p.to_string(name)}, {"num_terms", p.size()}, {"terms", terms}};
}

Json motif_graph_json(const crn::InstabilityMotif& motif) {
    const auto& net = motif.network;
    Json nodes = Json::array(), edges = Json::array();
    for (const auto& s : net.species) nodes.push_back(Json{{"id", "s:" + s.name}, {"kind", "species"}, {"name", s.name}});
    for (const auto& r : net.reactions) {
        const std::string rid = "r:" + r.label;
        nodes.push_back(Json{{"id", rid},
                             {"kind", "reaction"},
                             {"name", r.label},
                             {"reactants_elided", static_cast<bool>(motif.reactants_elided[r.id])},
                             {"products_elided", static_cast<bool>(motif.products_elided[r.id])}});
        for (auto [m, c] : r.reactants)
            edges.push_back(Json{{"source", "s:" + net.species[m].name}, {"target", rid}, {"kind", "reactant"}, {"coefficient", c}});
        for (auto [m, c] : r.products)
            edges.push_back(Json{{"source", rid}, {"target", "s:" + net.species[m].name}, {"kind", "product"}, {"coefficient", c}});
    }
    return Json{{"nodes", nodes}, {"edges", edges}};
}

Json analyze_report(const crn::ParsedNetwork& parsed, const AnalyzeOptions& opts, const std::string& input_name) {
    const crn::ReactionNetwork net = crn::freeze_species(parsed.network, opts.frozen);
    const bool symmetric = net.symmetry.has_value();
    const std::size_t jobs = crn::resolve_jobs(opts.jobs);

    Json report;
    report["schema_version"] = kSchemaVersion;
    report["tool"] = Json{{"name", kToolName}, {"version", kToolVersion}};
    report["input"] = input_name;
    report["options"] = Json{{"symmetry", to_string(opts.symmetry)},
                             {"frozen", std::vector<std::string>(opts.frozen.begin(), opts.frozen.end())},
                             {"validate", opts.validate},
                             {"seed", opts.seed}};

    Json species = Json::array(), reactions = Json::array();
    for (const auto& s : net.species) species.push_back(s.name);
    for (const auto& r : net.reactions) reactions.push_back(Json{{"label", r.label}, {"equation", crn::reaction_to_dsl(net, r)}});
    report["network"] = Json{{"num_species", net.num_species()},
                             {"num_reactions", net.num_reactions()},
                             {"species", species},
                             {"reactions", reactions},
                             {"stoichiometric_matrix", crn::stoichiometric_ints(net)},
                             {"symmetry", symmetry_json(crn::ParsedNetwork{net, {}, parsed.symmetry_inferred})},
                             {"warnings", parsed.warnings}};

    crn::CapacityOptions co;
    co.use_symmetry = symmetric;
    co.jobs = jobs;
    co.seed = opts.seed;
    const crn::CapacityVerdict verdict = crn::capacity_for_differentiation(net, co);
    const auto& cp = verdict.charpoly;
    auto name = [&](crn::SymbolId s) { return cp.name(s); };

    report["consistency"] = Json{{"consistent", verdict.flux.has_value()},
                                 {"flux", verdict.flux ? integer_vector(*verdict.flux) : Json(nullptr)}};
    Json laws = Json::array();
    for (const auto& w : verdict.conservation.vectors) {
        Json vec = integer_vector(w);
        laws.push_back(Json{{"vector", vec}, {"expression", linear_expression(net, vec)}});
    }
    report["conservation"] = Json{{"dimension", verdict.conservation_dim}, {"basis", laws}};
    report["nondegeneracy"] = Json{{"num_species", net.num_species()},
                                   {"conservation_dim", verdict.conservation_dim},
                                   {"k_tilde", verdict.k_tilde},
                                   {"required_k", net.num_species() - verdict.conservation_dim},
                                   {"nondegenerate", verdict.nondegenerate}};

    Json symbols = Json::array();
    for (crn::SymbolId s = 0; s < cp.symbols.num_canonical(); ++s) symbols.push_back(cp.name(s));
    Json coeffs = Json::array();
    for (std::size_t k = 0; k < cp.coefficients.size(); ++k) {
        Json c = polynomial_json(cp.coefficients[k], name);
        c["k"] = k;
        coeffs.push_back(c);
    }
    report["characteristic_polynomial"] = Json{{"convention", "det(G - lambda I) = sum_k a_k lambda^(|M|-k), G = S R"},
                                               {"kinetic_symmetry", cp.symbols.symmetric()},
                                               {"symbols", symbols},
                                               {"coefficients", coeffs}};

    const auto upfs = crn::find_unstable_positive_feedbacks(net, jobs);
    std::vector<std::vector<std::size_t>> classes;
    if (symmetric)
        classes = crn::symmetry_classes(upfs, *net.symmetry);
    else
        for (std::size_t i = 0; i < upfs.size(); ++i) classes.push_back({i});
    std::vector<std::size_t> class_of(upfs.size());
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (auto i : classes[c]) class_of[i] = c;
    Json items = Json::array();
    for (std::size_t i = 0; i < upfs.size(); ++i) items.push_back(feedback_entry(net, upfs[i], i, class_of[i]));
    report["feedbacks"] = Json{{"count", upfs.size()},
                               {"autocatalytic", crn::is_autocatalytic(upfs)},
                               {"unstable_positive", items},
                               {"symmetry_classes", classes}};

    const auto dd = crn::diagonal_dominance_check(net);
    report["diagonal_dominance"] = Json{{"structural", dd.structural}, {"symbolic", dd.symbolic}, {"holds", dd.holds()}};

    const auto trace = crn::trace_sign_analysis(net, {}, symmetric);
    report["trace"] = Json{{"sign", crn::to_string(trace.sign)},
                           {"polynomial", trace.trace.to_string([&](crn::SymbolId s) { return trace.symbols.canonical_name(s); })}};

    Json cap{{"status", crn::to_string(verdict.status)},
             {"kinetic_symmetry", cp.symbols.symmetric()},
             {"k_tilde", verdict.k_tilde}};
    cap["positive_monomial"] = verdict.positive_monomial
                                   ? monomial_json(verdict.positive_monomial->first, verdict.positive_monomial->second, name)
                                   : Json(nullptr);
    cap["negative_monomial"] = verdict.negative_monomial
                                   ? monomial_json(verdict.negative_monomial->first, verdict.negative_monomial->second, name)
                                   : Json(nullptr);
    if (verdict.witness) {
        Json values;
        for (crn::SymbolId s = 0; s < verdict.witness->size(); ++s) values[cp.name(s)] = (*verdict.witness)[s];
        cap["witness"] = Json{{"values", values},
                              {"relative_residual", verdict.witness_residual},
                              {"iterations", verdict.witness_iterations}};
    } else {
        cap["witness"] = nullptr;
    }
    if (symmetric) {
        crn::CapacityOptions plain = co;
        plain.use_symmetry = false;
        cap["without_kinetic_symmetry"] = crn::to_string(crn::capacity_for_differentiation(net, plain).status);
    }
    report["capacity"] = cap;

    if (opts.validate) report["validation"] = validation_json(net, verdict, opts.seed);

    std::string status = "ok";
    if (verdict.status == crn::CapacityStatus::Inconsistent) status = "inconsistent";
    if (verdict.status == crn::CapacityStatus::Degenerate) status = "degenerate";
    report["status"] = status;
    return report;
}

Json motifs_report(const crn::ParsedNetwork& parsed, const AnalyzeOptions& opts, const std::string& input_name) {
    const crn::ReactionNetwork net = crn::freeze_species(parsed.network, opts.frozen);
    const auto upfs = crn::find_unstable_positive_feedbacks(net, crn::resolve_jobs(opts.jobs));
    std::vector<std::vector<std::size_t>> classes;
    if (net.symmetry)
        classes = crn::symmetry_classes(upfs, *net.symmetry);
    else
        for (std::size_t i = 0; i < upfs.size(); ++i) classes.push_back({i});
    Json motifs = Json::array();
    for (std::size_t c = 0; c < classes.size(); ++c) {
        Json members = Json::array();
        for (auto i : classes[c]) {
            const auto motif = crn::instability_motif(net, upfs[i].selection);
            Json entry = feedback_entry(net, upfs[i], i, c);
            entry["graph"] = motif_graph_json(motif);
            members.push_back(entry);
        }
        motifs.push_back(Json{{"class", c}, {"members", members}});
    }
    return Json{{"schema_version", kSchemaVersion},
                {"tool", Json{{"name", kToolName}, {"version", kToolVersion}}},
                {"input", input_name},
                {"count", upfs.size()},
                {"num_classes", classes.size()},
                {"autocatalytic", crn::is_autocatalytic(upfs)},
                {"classes", motifs}};
}

int report_exit_code(const Json& report) { return report.at("status") == "ok" ? 0 : 3; }

std::string render_analysis_text(const Json& r) {
    std::ostringstream out;
    const auto& net = r["network"];
    out << "crncap " << r["tool"]["version"].get<std::string>() << " analysis of " << r["input"].get<std::string>() << "\n";
    out << "species: " << net["num_species"].get<std::size_t>() << ", reactions: " << net["num_reactions"].get<std::size_t>();
    if (!net["symmetry"].is_null()) out << ", symmetry: " << net["symmetry"]["source"].get<std::string>();
    out << "\n";
    for (const auto& w : net["warnings"]) out << "warning: " << w.get<std::string>() << "\n";

    const auto& cons = r["consistency"];
    out << "consistent: " << (cons["consistent"].get<bool>() ? "yes" : "no");
    if (!cons["flux"].is_null()) out << "  flux = " << cons["flux"].dump();
    out << "\n";
    out << "conservation laws: " << r["conservation"]["dimension"].get<std::size_t>() << "\n";
    for (const auto& w : r["conservation"]["basis"]) out << "  " << w["expression"].get<std::string>() << "\n";
    const auto& nd = r["nondegeneracy"];
    out << "k_tilde = " << nd["k_tilde"].get<std::size_t>() << ", |M| - n = " << nd["required_k"].get<std::size_t>()
        << (nd["nondegenerate"].get<bool>() ? " (nondegenerate)" : " (degenerate)") << "\n";

    const auto& cp = r["characteristic_polynomial"];
    out << "characteristic polynomial, " << cp["convention"].get<std::string>()
        << (cp["kinetic_symmetry"].get<bool>() ? ", kinetic symmetry" : "") << ":\n";
    for (const auto& c : cp["coefficients"]) {
        const std::size_t terms = c["num_terms"].get<std::size_t>();
        out << "  a_" << c["k"].get<std::size_t>() << " (" << terms << " terms)";
        if (terms <= 12) out << " = " << c["text"].get<std::string>();
        out << "\n";
    }

    const auto& fb = r["feedbacks"];
    out << "unstable positive feedbacks: " << fb["count"].get<std::size_t>() << " in "
        << fb["symmetry_classes"].size() << " symmetry classes"
        << (fb["autocatalytic"].get<bool>() ? ", autocatalytic" : "") << "\n";
    for (const auto& f : fb["unstable_positive"]) {
        out << "  #" << f["index"].get<std::size_t>() << " class " << f["symmetry_class"].get<std::size_t>() << ": {";
        bool first = true;
        for (const auto& p : f["child_selection"]) {
            out << (first ? "" : ", ") << p["species"].get<std::string>() << "->" << p["reaction"].get<std::string>();
            first = false;
        }
        out << "} matrix " << f["matrix"].dump() << (f["metzler"].get<bool>() ? " Metzler" : " non-Metzler") << "\n";
    }
    const auto& dd = r["diagonal_dominance"];
    out << "diagonal dominance: " << (dd["holds"].get<bool>() ? "holds" : "fails") << " (structural "
        << (dd["structural"].get<bool>() ? "yes" : "no") << ", symbolic " << (dd["symbolic"].get<bool>() ? "yes" : "no")
        << ")\n";
    out << "trace: " << r["trace"]["sign"].get<std::string>() << "\n";

    const auto& cap = r["capacity"];
    out << "capacity: " << cap["status"].get<std::string>();
    if (cap.contains("without_kinetic_symmetry"))
        out << " (without kinetic symmetry: " << cap["without_kinetic_symmetry"].get<std::string>() << ")";
    out << "\n";
    if (!cap["witness"].is_null()) {
        out << "witness (relative residual " << fmt_double(cap["witness"]["relative_residual"].get<double>()) << "):\n";
        for (const auto& [k, v] : cap["witness"]["values"].items()) out << "  " << k << " = " << fmt_double(v.get<double>()) << "\n";
    }
    if (r.contains("validation")) {
        const auto& v = r["validation"];
        if (!v["performed"].get<bool>()) {
            out << "validation: skipped (" << v["reason"].get<std::string>() << ")\n";
        } else {
            out << "validation (" << v["source"].get<std::string>() << "): flux error "
                << fmt_double(v["flux_error"].get<double>()) << ", jacobian error "
                << fmt_double(v["jacobian_error"].get<double>());
            if (!v["min_abs_eigenvalue"].is_null())
                out << ", min |lambda| " << fmt_double(v["min_abs_eigenvalue"].get<double>());
            out << (v["zero_eigenvalue"].get<bool>() ? ", zero eigenvalue" : "") << "\n";
        }
    }
    out << "status: " << r["status"].get<std::string>() << "\n";
    return out.str();
}

std::string render_motifs_text(const Json& r) {
    std::ostringstream out;
    out << r["count"].get<std::size_t>() << " unstable positive feedbacks in " << r["num_classes"].get<std::size_t>()
        << " classes" << (r["autocatalytic"].get<bool>() ? " (autocatalytic)" : "") << "\n";
    for (const auto& c : r["classes"]) {
        out << "\nclass " << c["class"].get<std::size_t>() << "\n";
        for (const auto& m : c["members"]) {
            out << "# feedback " << m["index"].get<std::size_t>() << ", matrix " << m["matrix"].dump()
                << (m["metzler"].get<bool>() ? ", Metzler" : "") << "\n";
            out << m["motif"]["dsl"].get<std::string>();
        }
    }
    return out.str();
}

}  // namespace crncap
