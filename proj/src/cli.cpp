#include "finlog/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "finlog/definability.hpp"
#include "finlog/errors.hpp"
#include "finlog/eval.hpp"
#include "finlog/formula.hpp"
#include "finlog/operations.hpp"
#include "finlog/parser.hpp"
#include "finlog/proofs.hpp"
#include "finlog/spectra.hpp"
#include "finlog/structure.hpp"

namespace finlog {

namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Vocabulary parse_vocab_spec(const std::string& spec) {
    std::vector<Symbol> symbols;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto slash = item.find('/');
        if (slash == std::string::npos)
            throw ConfigError("vocabulary entries look like name/arity: '" + item + "'");
        std::string name = item.substr(0, slash);
        name.erase(0, name.find_first_not_of(" \t"));
        name.erase(name.find_last_not_of(" \t") + 1);
        symbols.push_back({name, std::stoi(item.substr(slash + 1))});
    }
    return Vocabulary(std::move(symbols));
}

std::string set_to_string(const ValueSet& s) {
    if (s.empty())
        return "-";
    std::string out;
    for (const auto& t : s) {
        out += out.empty() ? "(" : "; (";
        for (std::size_t i = 0; i < t.size(); ++i)
            out += (i ? "," : "") + std::to_string(t[i]);
        out += ")";
    }
    return out;
}

EvalEnv base_env() {
    EvalEnv env;
    env.with_oracle(oracle_nonempty_p());
    env.with_oracle(oracle_even_p());
    env.with_oracle(oracle_even_size());
    env.with_oracle(oracle_all());
    env.with_oracle(oracle_empty());
    return env;
}

ClassOracle class_by_name(const std::string& name, const EvalEnv& env) {
    if (!name.empty() && name[0] == '@') {
        auto path = name.substr(1);
        auto sentence = parse_formula(read_file(path));
        return oracle_from_sentence(path, sentence, inferred_vocabulary(*sentence), env);
    }
    auto it = env.oracles.find(name);
    if (it == env.oracles.end())
        throw ConfigError("unknown class '" + name + "' (builtins: nonempty-P, even-P, "
                          "even-size, all, empty; or @sentence-file)");
    return it->second;
}

ProjectionDefinition parse_definition_file(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::optional<Vocabulary> visible, hidden;
    std::string sentence_text;
    bool in_sentence = false;
    while (std::getline(in, line)) {
        if (in_sentence) {
            sentence_text += "\n" + line;
            continue;
        }
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        if (trimmed.empty() || trimmed[0] == '#')
            continue;
        if (trimmed.rfind("visible", 0) == 0) {
            auto rest = trimmed.substr(7);
            visible = rest.find_first_not_of(" \t") == std::string::npos
                          ? Vocabulary{}
                          : parse_vocab_spec(rest);
        } else if (trimmed.rfind("hidden", 0) == 0) {
            auto rest = trimmed.substr(6);
            hidden = rest.find_first_not_of(" \t") == std::string::npos
                         ? Vocabulary{}
                         : parse_vocab_spec(rest);
        } else if (trimmed.rfind("sentence", 0) == 0) {
            sentence_text = trimmed.substr(8);
            in_sentence = true;
        } else {
            throw ConfigError("definition files use visible/hidden/sentence lines, got: " +
                              trimmed);
        }
    }
    if (!visible || !hidden || sentence_text.empty())
        throw ConfigError("definition file needs visible, hidden and sentence");
    return ProjectionDefinition{visible->extended_with(*hidden), *visible,
                                parse_formula(sentence_text)};
}

std::string format_definition(const ProjectionDefinition& d) {
    auto voc_line = [](const Vocabulary& v) {
        std::string out;
        for (const auto& sym : v.symbols())
            out += (out.empty() ? "" : ", ") + sym.name + "/" + std::to_string(sym.arity);
        return out;
    };
    std::string hidden;
    for (const auto& sym : d.full.symbols())
        if (!d.visible.contains(sym.name))
            hidden += (hidden.empty() ? "" : ", ") + sym.name + "/" + std::to_string(sym.arity);
    return "visible " + voc_line(d.visible) + "\nhidden " + hidden + "\nsentence " +
           render(d.sentence) + "\n";
}

struct Output {
    std::ostream& out;
    bool json;
    Json j;

    void line(const std::string& text) {
        if (!json)
            out << text << "\n";
    }
    ~Output() {
        if (json)
            out << j.dump(2) << "\n";
    }
};

Json tuples_to_json(const std::set<Tuple>& ts) {
    Json arr = Json::array();
    for (const auto& t : ts)
        arr.push_back(t);
    return arr;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"finlog: evaluation, invariance, definability, spectra and proofs over "
                 "finite structures"};
    app.require_subcommand(1);

    std::string format = "text";
    std::uint64_t budget = kDefaultBudget;
    std::uint64_t seed = 1;
    app.add_option("--format", format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--budget", budget, "structure/expansion visit budget");
    app.add_option("--seed", seed, "seed for randomized corpora");

    // shared option storage
    std::string structure_path, formula_text, formula_file, class_name, vocab_spec;
    std::vector<std::string> oracle_specs, formulas, formula_files;
    int q_threshold = 0;
    int max_size = 3, size = 2, alpha = 0, arity = 1, k_threshold = 3;
    bool prime = false, global = false;
    std::string var = "x";
    std::string builtin_name, table_path, predicates_spec;
    std::string pos_path, neg_path, def_path, proof_path;
    std::string c_spec, d_spec = "all", axioms_spec = "1,2,3,4";
    std::uint64_t limit = 20;
    bool count_only = false;

    auto add_env_opts = [&](CLI::App* cmd) {
        cmd->add_option("--oracle", oracle_specs,
                        "extra class oracle NAME=@sentence-file (builtins are preregistered)");
        cmd->add_option("--q", q_threshold, "bind the schematic Q to 'at least k'");
    };
    auto make_env = [&]() {
        EvalEnv env = base_env();
        for (const auto& spec : oracle_specs) {
            auto eq = spec.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--oracle takes NAME=@file");
            auto oracle = class_by_name(spec.substr(eq + 1), env);
            oracle.name = spec.substr(0, eq);
            env.with_oracle(std::move(oracle));
        }
        if (q_threshold > 0)
            env.with_q(QInterpretation::count_threshold(q_threshold));
        return env;
    };
    auto one_formula = [&]() {
        if (formula_text.empty() == formula_file.empty())
            throw ConfigError("give exactly one of --formula / --formula-file");
        return parse_formula(formula_text.empty() ? read_file(formula_file) : formula_text);
    };
    auto the_operation = [&]() {
        if (!table_path.empty())
            return parse_operation_table(read_file(table_path));
        if (builtin_name.empty())
            throw ConfigError("give --builtin NAME or --table FILE");
        return LocalOperation::builtin(builtin_name, size, arity);
    };

    int exit_code = 0;

    auto* eval_cmd = app.add_subcommand("eval", "truth of a sentence in a structure");
    eval_cmd->add_option("--structure", structure_path, "structure file")->required();
    eval_cmd->add_option("--formula", formula_text, "sentence text");
    eval_cmd->add_option("--formula-file", formula_file, "sentence file");
    add_env_opts(eval_cmd);
    eval_cmd->callback([&] {
        auto s = parse_structure(read_file(structure_path));
        bool result = eval_sentence(s, one_formula(), make_env());
        Output o{out, format == "json", Json{{"verb", "eval"}, {"result", result}}};
        o.line(result ? "true" : "false");
        exit_code = result ? 0 : 1;
    });

    auto* value_cmd = app.add_subcommand("value", "satisfying assignments of a formula");
    value_cmd->add_option("--structure", structure_path, "structure file")->required();
    value_cmd->add_option("--formula", formula_text, "formula text");
    value_cmd->add_option("--formula-file", formula_file, "formula file");
    value_cmd->add_option("--vars", vocab_spec, "comma-separated variable list")->required();
    add_env_opts(value_cmd);
    value_cmd->callback([&] {
        auto s = parse_structure(read_file(structure_path));
        std::vector<std::string> vars;
        std::istringstream in(vocab_spec);
        std::string v;
        while (std::getline(in, v, ','))
            vars.push_back(v);
        auto sv = eval_value(s, one_formula(), vars, make_env());
        Output o{out, format == "json",
                 Json{{"verb", "value"}, {"vars", sv.vars},
                      {"tuples", tuples_to_json(sv.tuples)}}};
        o.line(set_to_string(sv.tuples));
    });

    auto* spec_cmd = app.add_subcommand("spectrum", "realized model sizes in a window");
    spec_cmd->add_option("--formula", formula_text, "sentence text");
    spec_cmd->add_option("--formula-file", formula_file, "sentence file");
    spec_cmd->add_option("--class", class_name, "class oracle (builtin or @file)");
    spec_cmd->add_option("--max-size", max_size, "window upper end")->required();
    spec_cmd->add_option("--vocab", vocab_spec, "vocabulary 'P/1,R/2' (default: inferred)");
    add_env_opts(spec_cmd);
    spec_cmd->callback([&] {
        SpectrumReport report;
        auto env = make_env();
        if (!class_name.empty()) {
            report = spectrum(class_by_name(class_name, env), max_size, budget);
        } else {
            auto f = one_formula();
            Vocabulary voc = vocab_spec.empty() ? inferred_vocabulary(*f)
                                                : parse_vocab_spec(vocab_spec);
            report = spectrum(f, voc, max_size, env, budget);
        }
        Json counts = Json::array();
        for (const auto& [n, models] : report.model_counts)
            counts.push_back(Json{{"size", n},
                                  {"models", models},
                                  {"classes", report.class_counts.at(n)}});
        Output o{out, format == "json",
                 Json{{"verb", "spectrum"},
                      {"subject", report.subject},
                      {"max_size", report.max_size},
                      {"realized", report.realized},
                      {"min_model_size",
                       report.realized.empty() ? Json(nullptr) : Json(report.realized.front())},
                      {"largest_realized_in_window",
                       report.realized.empty() ? Json(nullptr) : Json(report.realized.back())},
                      {"counts", counts}}};
        o.line("spectrum of " + report.subject + " on [1.." + std::to_string(max_size) + "]");
        std::string realized;
        for (int n : report.realized)
            realized += (realized.empty() ? "" : ", ") + std::to_string(n);
        o.line("realized: {" + realized + "}");
        o.line(report.realized.empty()
                   ? "no model up to the window bound (inconclusive beyond it)"
                   : "min model size: " + std::to_string(report.realized.front()) +
                         "; largest realized in window: " +
                         std::to_string(report.realized.back()) +
                         " (inconclusive beyond the window)");
        for (const auto& [n, models] : report.model_counts)
            o.line("size " + std::to_string(n) + ": models " + std::to_string(models) +
                   ", classes " + std::to_string(report.class_counts.at(n)));
    });

    auto* ls_cmd = app.add_subcommand("ls-check", "finite-window Loewenheim-Skolem verdicts");
    ls_cmd->add_option("--formula", formulas, "sentence text (repeatable)");
    ls_cmd->add_option("--formula-file", formula_files, "sentence file (repeatable)");
    ls_cmd->add_option("--C", c_spec, "source size class")->required();
    ls_cmd->add_option("--D", d_spec, "target size class")->required();
    ls_cmd->add_option("--max-size", max_size, "window upper end")->required();
    ls_cmd->add_option("--vocab", vocab_spec, "vocabulary (default: inferred per sentence)");
    add_env_opts(ls_cmd);
    ls_cmd->callback([&] {
        std::vector<FormulaPtr> fs;
        for (const auto& t : formulas)
            fs.push_back(parse_formula(t));
        for (const auto& p : formula_files)
            fs.push_back(parse_formula(read_file(p)));
        if (fs.empty())
            throw ConfigError("give at least one sentence");
        auto env = make_env();
        auto c = SizeClass::parse(c_spec);
        auto d = SizeClass::parse(d_spec);
        Json results = Json::array();
        bool failed = false;
        Output o{out, format == "json", {}};
        for (const auto& f : fs) {
            Vocabulary voc = vocab_spec.empty() ? inferred_vocabulary(*f)
                                                : parse_vocab_spec(vocab_spec);
            auto report = ls_check({f}, voc, c, d, max_size, env, budget);
            const auto& r = report.results[0];
            failed = failed || r.verdict == LsVerdict::FailsInRange;
            results.push_back(Json{{"sentence", r.sentence},
                                   {"verdict", to_string(r.verdict)},
                                   {"realized", r.realized}});
            o.line(std::string(to_string(r.verdict)) + ": " + r.sentence);
        }
        o.j = Json{{"verb", "ls-check"}, {"C", c.to_string()}, {"D", d.to_string()},
                   {"max_size", max_size}, {"results", results}};
        exit_code = failed ? 1 : 0;
    });

    auto* inv_cmd = app.add_subcommand("invariance", "permutation/bijection invariance");
    inv_cmd->add_option("--builtin", builtin_name, "and | or | exists | complement");
    inv_cmd->add_option("--table", table_path, "operation table file");
    inv_cmd->add_option("--arity", arity, "input arity for built-ins");
    inv_cmd->add_option("--size", size, "domain size (local check)");
    inv_cmd->add_flag("--global", global, "check the family across sizes 1..max-size");
    inv_cmd->add_option("--max-size", max_size, "largest size for --global");
    inv_cmd->callback([&] {
        InvarianceReport report;
        if (global) {
            if (!table_path.empty())
                throw ConfigError("--global works with built-ins (tables fix one size)");
            report = is_bijection_invariant(GlobalOperation::builtin(builtin_name, arity),
                                            max_size, budget);
        } else {
            report = is_permutation_invariant(the_operation(), budget);
        }
        Json j{{"verb", "invariance"},
               {"invariant", report.invariant},
               {"checked", report.checked}};
        Output o{out, format == "json", {}};
        if (report.invariant) {
            o.line("invariant (" + std::to_string(report.checked) + " checks)");
            j["counterexample"] = nullptr;
        } else {
            const auto& cex = *report.counterexample;
            std::string pi;
            for (int i = 0; i < cex.pi.size(); ++i)
                pi += (i ? " " : "") + std::to_string(cex.pi(i));
            o.line("counterexample at size " + std::to_string(cex.domain_size));
            o.line("  pi: " + pi);
            for (std::size_t i = 0; i < cex.inputs.size(); ++i)
                o.line("  input " + std::to_string(i) + ": " + set_to_string(cex.inputs[i]));
            o.line("  f(<pi''A>): " + set_to_string(cex.output_of_images));
            o.line("  pi''f(<A>): " + set_to_string(cex.image_of_output));
            Json inputs = Json::array();
            for (const auto& s : cex.inputs)
                inputs.push_back(tuples_to_json(s));
            j["counterexample"] = Json{{"size", cex.domain_size},
                                       {"pi", cex.pi.mapping()},
                                       {"inputs", inputs},
                                       {"output_of_images", tuples_to_json(cex.output_of_images)},
                                       {"image_of_output", tuples_to_json(cex.image_of_output)}};
        }
        o.j = std::move(j);
        exit_code = report.invariant ? 0 : 1;
    });

    auto* desc_cmd = app.add_subcommand("describes", "does a formula describe an operation");
    desc_cmd->add_option("--formula", formula_text, "formula text");
    desc_cmd->add_option("--formula-file", formula_file, "formula file");
    desc_cmd->add_option("--builtin", builtin_name, "and | or | exists | complement");
    desc_cmd->add_option("--table", table_path, "operation table file");
    desc_cmd->add_option("--arity", arity, "input arity for built-ins");
    desc_cmd->add_option("--size", size, "domain size");
    desc_cmd->add_option("--predicates", predicates_spec,
                         "comma-separated predicate names (default P0,P1,..)");
    add_env_opts(desc_cmd);
    desc_cmd->callback([&] {
        auto f = the_operation();
        std::vector<std::string> predicates;
        if (predicates_spec.empty()) {
            for (std::size_t i = 0; i < f.input_arities.size(); ++i)
                predicates.push_back("P" + std::to_string(i));
        } else {
            std::istringstream in(predicates_spec);
            std::string p;
            while (std::getline(in, p, ','))
                predicates.push_back(p);
        }
        auto report = describes(one_formula(), f, predicates, make_env(), budget);
        Json j{{"verb", "describes"}, {"describes", report.describes}};
        Output o{out, format == "json", {}};
        if (report.describes) {
            o.line("describes");
            j["counterexample"] = nullptr;
        } else {
            const auto& cex = *report.counterexample;
            o.line("does not describe");
            Json inputs = Json::array();
            for (std::size_t i = 0; i < cex.inputs.size(); ++i) {
                o.line("  " + predicates[i] + " = " + set_to_string(cex.inputs[i]));
                inputs.push_back(tuples_to_json(cex.inputs[i]));
            }
            o.line("  formula value: " + set_to_string(cex.formula_value));
            o.line("  operation value: " + set_to_string(cex.operation_value));
            j["counterexample"] = Json{{"inputs", inputs},
                                       {"formula_value", tuples_to_json(cex.formula_value)},
                                       {"operation_value", tuples_to_json(cex.operation_value)}};
        }
        o.j = std::move(j);
        exit_code = report.describes ? 0 : 1;
    });

    auto* scott_cmd = app.add_subcommand("scott", "order-characterizing formulas");
    scott_cmd->add_option("--alpha", alpha, "ordinal")->required();
    scott_cmd->add_flag("--prime", prime, "emit eta' (order type of the whole domain)");
    scott_cmd->add_option("--var", var, "free variable for eta");
    scott_cmd->callback([&] {
        auto f = prime ? eta_prime(alpha) : eta(alpha, var);
        Output o{out, format == "json",
                 Json{{"verb", "scott"}, {"alpha", alpha}, {"prime", prime},
                      {"order_symbol", kOrderSymbol}, {"formula", render(f)}}};
        o.line(render(f));
    });

    auto* mcgee_cmd = app.add_subcommand(
        "mcgee", "characterizing sentence of a structure, or a per-size class definition");
    mcgee_cmd->add_option("--structure", structure_path, "structure file");
    mcgee_cmd->add_option("--class", class_name, "class oracle (builtin or @file)");
    mcgee_cmd->add_option("--size", size, "size for --class");
    add_env_opts(mcgee_cmd);
    mcgee_cmd->callback([&] {
        Output o{out, format == "json", {}};
        if (!structure_path.empty()) {
            auto s = parse_structure(read_file(structure_path));
            auto cs = characterizing_phi(s, Bijection::identity(s.size()));
            auto full = mk_and(eta_prime(s.size()), cs.phi);
            o.line("order symbol: " + cs.order_symbol);
            o.line("phi: " + render(cs.phi));
            o.line("characterizing sentence: " + render(full));
            o.j = Json{{"verb", "mcgee"},
                       {"order_symbol", cs.order_symbol},
                       {"phi", render(cs.phi)},
                       {"characterizing_sentence", render(full)}};
        } else if (!class_name.empty()) {
            auto env = make_env();
            auto def = define_class_at_size(class_by_name(class_name, env), size, budget);
            o.line("# members definition (size " + std::to_string(size) + ")");
            o.line(format_definition(def.members));
            o.line("# complement definition");
            o.line(format_definition(def.complement));
            o.line("# representatives: " + std::to_string(def.representatives.size()));
            o.j = Json{{"verb", "mcgee"},
                       {"size", size},
                       {"members", format_definition(def.members)},
                       {"complement", format_definition(def.complement)},
                       {"representatives", def.representatives.size()}};
        } else {
            throw ConfigError("give --structure or --class");
        }
    });

    auto* sigma_cmd = app.add_subcommand("sigma-member", "expansion-search membership");
    sigma_cmd->add_option("--definition", def_path, "projection definition file")->required();
    sigma_cmd->add_option("--structure", structure_path, "structure file")->required();
    add_env_opts(sigma_cmd);
    sigma_cmd->callback([&] {
        auto d = parse_definition_file(read_file(def_path));
        auto s = parse_structure(read_file(structure_path));
        bool member = sigma_membership(d, s, make_env(), budget);
        Output o{out, format == "json", Json{{"verb", "sigma-member"}, {"member", member}}};
        o.line(member ? "member" : "not a member");
        exit_code = member ? 0 : 1;
    });

    auto* delta_cmd = app.add_subcommand("delta-check", "certify a Delta pair on a window");
    delta_cmd->add_option("--pos", pos_path, "positive definition file")->required();
    delta_cmd->add_option("--neg", neg_path, "negative definition file")->required();
    delta_cmd->add_option("--max-size", max_size, "window upper end")->required();
    add_env_opts(delta_cmd);
    delta_cmd->callback([&] {
        auto report = delta_check(parse_definition_file(read_file(pos_path)),
                                  parse_definition_file(read_file(neg_path)), max_size,
                                  make_env(), budget);
        Json violations = Json::array();
        Output o{out, format == "json", {}};
        if (report.certified) {
            o.line("delta-certified up to size " + std::to_string(max_size) + " (" +
                   std::to_string(report.structures_checked) + " structures)");
        } else {
            o.line("not a delta pair; violations:");
            for (const auto& v : report.violations) {
                o.line((v.pos_accepts ? "both accept:" : "neither accepts:"));
                o.line(format_structure(v.structure));
                violations.push_back(Json{{"structure", format_structure(v.structure)},
                                          {"pos_accepts", v.pos_accepts},
                                          {"neg_accepts", v.neg_accepts}});
            }
        }
        o.j = Json{{"verb", "delta-check"},
                   {"certified", report.certified},
                   {"structures_checked", report.structures_checked},
                   {"violations", violations}};
        exit_code = report.certified ? 0 : 1;
    });

    auto* proof_cmd = app.add_subcommand("proof-check", "check a Hilbert-style proof");
    proof_cmd->add_option("file", proof_path, "proof file")->required();
    proof_cmd->callback([&] {
        auto result = check_proof(parse_proof(read_file(proof_path)));
        Output o{out, format == "json",
                 Json{{"verb", "proof-check"},
                      {"accepted", result.accepted},
                      {"failed_line", result.accepted ? Json(nullptr) : Json(result.failed_line)},
                      {"reason", result.reason}}};
        o.line(result.accepted
                   ? "ACCEPT"
                   : "REJECT line " + std::to_string(result.failed_line) + ": " + result.reason);
        exit_code = result.accepted ? 0 : 1;
    });

    auto* scan_cmd = app.add_subcommand("soundness-scan",
                                        "probe the Keisler axioms under counting semantics");
    scan_cmd->add_option("--k", k_threshold, "read Q as 'at least k'")->required();
    scan_cmd->add_option("--max-size", max_size, "largest structure size")->required();
    scan_cmd->add_option("--axioms", axioms_spec, "comma-separated subset of 1,2,3,4");
    scan_cmd->callback([&] {
        std::set<int> axioms;
        std::istringstream in(axioms_spec);
        std::string item;
        while (std::getline(in, item, ','))
            axioms.insert(std::stoi(item));
        auto report = soundness_scan(k_threshold, max_size, axioms, seed, budget);
        Json cexs = Json::array();
        Output o{out, format == "json", {}};
        o.line(std::to_string(report.instances) + " instances, " +
               std::to_string(report.evaluations) + " evaluations, " +
               std::to_string(report.counterexamples.size()) + " counterexamples");
        for (const auto& cex : report.counterexamples) {
            o.line("axiom " + std::to_string(cex.axiom) + " fails: " + render(cex.instance));
            o.line(format_structure(cex.structure));
            cexs.push_back(Json{{"axiom", cex.axiom},
                                {"instance", render(cex.instance)},
                                {"structure", format_structure(cex.structure)}});
        }
        o.j = Json{{"verb", "soundness-scan"},
                   {"k", k_threshold},
                   {"max_size", max_size},
                   {"instances", report.instances},
                   {"evaluations", report.evaluations},
                   {"counterexamples", cexs}};
        exit_code = report.counterexamples.empty() ? 0 : 1;
    });

    auto* enum_cmd = app.add_subcommand("enumerate", "stream all structures over a vocabulary");
    enum_cmd->add_option("--vocab", vocab_spec, "vocabulary 'P/1,R/2'")->required();
    enum_cmd->add_option("--size", size, "domain size")->required();
    enum_cmd->add_option("--limit", limit, "print at most this many");
    enum_cmd->add_flag("--count", count_only, "print only the total");
    enum_cmd->callback([&] {
        auto voc = parse_vocab_spec(vocab_spec);
        StructureEnumerator en(voc, size, budget);
        Output o{out, format == "json", {}};
        Json structures = Json::array();
        o.line("total: " + std::to_string(en.total()));
        Structure s(voc, size);
        std::uint64_t printed = 0;
        while (!count_only && printed < limit && en.next(s)) {
            o.line(format_structure(s));
            structures.push_back(format_structure(s));
            ++printed;
        }
        o.j = Json{{"verb", "enumerate"},
                   {"total", en.total()},
                   {"structures", structures}};
    });

    for (auto* sub : app.get_subcommands(nullptr))
        sub->fallthrough();

    std::vector<const char*> argv;
    argv.push_back("finlog");
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::stringstream dummy;
        int code = app.exit(e, format == "json" ? dummy : out, err);
        return code == 0 ? 0 : 2;
    } catch (const BudgetError& e) {
        err << "budget exhausted: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}

}  // namespace finlog
