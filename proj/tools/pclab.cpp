// Command-line surface for the proof-restriction laboratory: instance
// generation, expander certification, classification, proof checking,
// regularization, the semantic transform and the width probe, each emitting a
// JSON report. Exit codes: 0 all pass, 1 assertion failure, 2 budget or
// infeasibility, 3 input error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pclab/assign.hpp"
#include "pclab/classify.hpp"
#include "pclab/error.hpp"
#include "pclab/f2sys.hpp"
#include "pclab/frege.hpp"
#include "pclab/graph.hpp"
#include "pclab/regularize.hpp"
#include "pclab/rng.hpp"
#include "pclab/semantic.hpp"

using nlohmann::json;
using namespace pclab;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InputError, "cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InputError, "cannot write " + path);
    out << content;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

void emit_report(const json& report, const std::string& out_path) {
    std::string text = report.dump(2) + "\n";
    if (out_path.empty()) std::cout << text;
    else write_file(out_path, text);
}

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::BudgetExceeded:
        case ErrorCode::SupportTooLarge:
        case ErrorCode::WidthLimit:
        case ErrorCode::ClauseTooWide: return 2;
        default: return 3;
    }
}

struct ParamArgs {
    long long r = 2;
    long long delta = 3;
    std::string c = "1";

    ExpanderParams params() const { return ExpanderParams{r, delta, parse_rational(c)}; }

    void attach(CLI::App* cmd) {
        cmd->add_option("--r", r, "expansion size parameter r");
        cmd->add_option("--delta", delta, "left degree cap");
        cmd->add_option("--c", c, "expansion constant, exact rational like 3/2");
    }
};

json params_json(const ExpanderParams& p) {
    return json{{"r", p.r}, {"delta", p.degree_cap}, {"c", rational_to_string(p.c)}};
}

json expander_check_json(const ExpanderCheck& c) {
    json j;
    switch (c.result) {
        case ExpanderCheck::Result::Certified: j["result"] = "certified"; break;
        case ExpanderCheck::Result::Counterexample: j["result"] = "counterexample"; break;
        case ExpanderCheck::Result::DegreeViolation: j["result"] = "degree-violation"; break;
        case ExpanderCheck::Result::NoCounterexampleFound:
            j["result"] = "no-counterexample-found";
            break;
    }
    if (!c.witness.empty()) {
        json w = json::array();
        for (int v : c.witness) w.push_back(v + 1);
        j["witness"] = w;
    }
    if (!c.detail.empty()) j["detail"] = c.detail;
    return j;
}

json regularize_json(const FormulaStore& store, const RegularizationResult& r,
                     const ThresholdSchedule& sched) {
    json j;
    j["outcome"] = r.outcome == RegularizationResult::Outcome::Completed ? "completed"
                                                                         : "budget-exceeded";
    j["schedule"] = {{"n", sched.n}, {"k", sched.k}, {"m", sched.m},
                     {"d", sched.d.d}, {"epsilon", rational_to_string(sched.epsilon)}};
    json steps = json::array();
    for (const StepRecord& s : r.steps) {
        json tau = json::array();
        for (const auto& [v, b] : s.tau) tau.push_back({{"var", sysvar_name(v)}, {"v", b ? 1 : 0}});
        steps.push_back({{"phase", s.phase},
                         {"step", s.step},
                         {"chosen", s.chosen},
                         {"alpha", s.alpha ? 1 : 0},
                         {"eliminated", s.eliminated},
                         {"h_before", s.h_before},
                         {"h_after", s.h_after},
                         {"tau", tau},
                         {"extension_size", s.extension_size}});
    }
    j["steps"] = steps;
    json phases = json::array();
    for (const PhaseRecord& p : r.phases) {
        json pairs = json::array();
        for (const auto& [f, v] : p.sigma_pairs) pairs.push_back({{"f", f}, {"v", v ? 1 : 0}});
        phases.push_back({{"phase", p.phase}, {"steps", p.steps}, {"sigma", pairs}});
    }
    j["phases"] = phases;
    json asserts = json::array();
    for (const AssertionRecord& a : r.assertions) {
        json e = {{"name", a.name}, {"pass", a.pass}};
        if (!a.detail.empty()) e["detail"] = a.detail;
        asserts.push_back(e);
    }
    j["assertions"] = asserts;
    j["deviations"] = r.deviations;
    j["rho"] = json::parse(var_assignment_to_json(store, r.rho));
    j["sigma"] = json::parse(assignment_to_json(r.sigma));
    if (r.offending) j["offending_step"] = {{"phase", r.offending->phase},
                                            {"step", r.offending->step},
                                            {"chosen", r.offending->chosen},
                                            {"extension_size", r.offending->extension_size}};
    return j;
}

FregeProof load_proof(FormulaStore& store, const std::string& proof_path,
                      const std::string& xor_path, const std::string& cnf_path) {
    std::string text = read_file(proof_path);
    FregeProof raw = parse_proof_jsonl(store, text);
    std::vector<Formula> inputs;
    if (!xor_path.empty()) {
        LinSystem sys = parse_xor(read_file(xor_path));
        inputs = formulas_of_cnf(store, cnf_encoding(sys));
    } else if (!cnf_path.empty()) {
        inputs = formulas_of_cnf(store, parse_dimacs(read_file(cnf_path)));
    } else {
        return raw;
    }
    return FregeProof(raw.lines(), inputs, raw.target());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"proof-restriction laboratory"};
    app.require_subcommand(1);

    std::string out_path;
    app.add_option("--out", out_path, "write the JSON report here instead of stdout");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random 3-CNF and its XOR translation");
    uint64_t seed = 1;
    long long n = 24;
    std::string density = "6";
    std::string out_cnf = "instance.cnf";
    std::string out_xor = "instance.xor";
    gen->add_option("--seed", seed, "64-bit seed");
    gen->add_option("--n", n, "variable count");
    gen->add_option("--density", density, "clause density C (rational)");
    gen->add_option("--out-cnf", out_cnf);
    gen->add_option("--out-xor", out_xor);

    // cnf2xor
    auto* c2x = app.add_subcommand("cnf2xor", "translate a 3-CNF into a linear system");
    std::string cnf_in;
    std::string xor_out = "out.xor";
    c2x->add_option("--cnf", cnf_in, "DIMACS input")->required();
    c2x->add_option("--out-xor", xor_out);

    // certify
    auto* certify = app.add_subcommand("certify", "expansion certificate for a system graph");
    std::string certify_xor, certify_graph;
    ParamArgs certify_params;
    bool weak = false, sampled = false;
    uint64_t certify_seed = 1;
    certify->add_option("--xor", certify_xor, "XOR system file");
    certify->add_option("--graph", certify_graph, "graph file");
    certify_params.attach(certify);
    certify->add_flag("--weak", weak, "check the weak expansion property");
    certify->add_flag("--sampled", sampled, "sampled mode (never certifies)");
    certify->add_option("--sample-seed", certify_seed);

    // closure
    auto* clo = app.add_subcommand("closure", "closure and extension of a right-vertex set");
    std::string clo_xor, clo_graph, clo_j;
    long long clo_r = 2;
    int clo_limit = 20;
    clo->add_option("--xor", clo_xor);
    clo->add_option("--graph", clo_graph);
    clo->add_option("--j", clo_j, "comma-separated 1-based right labels")->required();
    clo->add_option("--r", clo_r);
    clo->add_option("--exhaustive-limit", clo_limit);

    // classify
    auto* cls = app.add_subcommand("classify", "live/forced classification of a formula");
    std::string cls_xor, cls_formula;
    ParamArgs cls_params;
    bool cls_strict = false;
    cls->add_option("--xor", cls_xor)->required();
    cls->add_option("--formula", cls_formula)->required();
    cls_params.attach(cls);
    cls->add_flag("--strict", cls_strict);

    // check-proof
    auto* chk = app.add_subcommand("check-proof", "verify a derivation");
    std::string chk_proof, chk_xor, chk_cnf;
    chk->add_option("--proof", chk_proof)->required();
    chk->add_option("--xor", chk_xor, "inputs = CNF encoding of this system");
    chk->add_option("--cnf", chk_cnf, "inputs = clauses of this CNF");

    // regularize
    auto* reg = app.add_subcommand("regularize", "run the greedy regularization");
    std::string reg_proof, reg_xor;
    ParamArgs reg_params;
    int reg_depth = 1;
    bool reg_strict = false, reg_ignore_budget = false;
    int reg_limit = 20;
    reg->add_option("--proof", reg_proof)->required();
    reg->add_option("--xor", reg_xor)->required();
    reg_params.attach(reg);
    reg->add_option("--depth", reg_depth, "number of phases k");
    reg->add_flag("--strict", reg_strict);
    reg->add_flag("--ignore-extension-budget", reg_ignore_budget,
                  "run past the cr/4 budget (recorded as a deviation)");
    reg->add_option("--exhaustive-limit", reg_limit);

    // transform
    auto* tra = app.add_subcommand("transform", "syntactic proof to semantic derivation");
    std::string tra_proof, tra_sigma, tra_rho, tra_out, tra_xor, tra_cnf;
    tra->add_option("--proof", tra_proof)->required();
    tra->add_option("--sigma", tra_sigma, "formula assignment file")->required();
    tra->add_option("--rho", tra_rho, "variable assignment applied first");
    tra->add_option("--xor", tra_xor);
    tra->add_option("--cnf", tra_cnf);
    tra->add_option("--out-derivation", tra_out);

    // saturate
    auto* sat = app.add_subcommand("saturate", "width-bounded resolution saturation");
    std::string sat_cnf;
    int sat_width = 3;
    sat->add_option("--cnf", sat_cnf)->required();
    sat->add_option("--width", sat_width)->required();

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "regularize, transform, check, width probe");
    std::string pipe_proof, pipe_xor;
    ParamArgs pipe_params;
    int pipe_depth = 1, pipe_probe = 4, pipe_limit = 20;
    bool pipe_strict = false, pipe_ignore_budget = false;
    pipe->add_option("--proof", pipe_proof)->required();
    pipe->add_option("--xor", pipe_xor)->required();
    pipe_params.attach(pipe);
    pipe->add_option("--depth", pipe_depth);
    pipe->add_option("--width-probe-max", pipe_probe, "try saturation up to this width");
    pipe->add_flag("--strict", pipe_strict);
    pipe->add_flag("--ignore-extension-budget", pipe_ignore_budget);
    pipe->add_option("--exhaustive-limit", pipe_limit);

    CLI11_PARSE(app, argc, argv);

    Timer timer;
    json report;
    int code = 0;

    try {
        if (gen->parsed()) {
            Rational c = parse_rational(density);
            Cnf f = random_3cnf(static_cast<int>(n), c, sub_seed(seed, "gen-3cnf"));
            LinSystem sys = cnf3_to_xor(f);
            write_file(out_cnf, dimacs_to_string(f));
            write_file(out_xor, xor_to_string(sys));
            report["command"] = "gen";
            report["config"] = {{"seed", seed}, {"n", n}, {"density", density}};
            report["clauses"] = f.clauses.size();
            report["below_density_threshold"] = c < density_threshold();
            report["files"] = {{"cnf", out_cnf}, {"xor", out_xor}};
        } else if (c2x->parsed()) {
            Cnf f = parse_dimacs(read_file(cnf_in));
            LinSystem sys = cnf3_to_xor(f);
            write_file(xor_out, xor_to_string(sys));
            report["command"] = "cnf2xor";
            report["equations"] = sys.size();
            report["files"] = {{"xor", xor_out}};
        } else if (certify->parsed()) {
            BipartiteGraph g = certify_graph.empty()
                                   ? incidence_graph(parse_xor(read_file(certify_xor)))
                                   : BipartiteGraph::parse(read_file(certify_graph));
            ExpanderCheckOptions opts;
            opts.sampled = sampled;
            opts.seed = sub_seed(certify_seed, "certify");
            ExpanderCheck result = weak ? is_weak_expander(g, certify_params.params(), opts)
                                        : is_boundary_expander(g, certify_params.params(), opts);
            report["command"] = "certify";
            report["config"] = {{"params", params_json(certify_params.params())},
                                {"mode", sampled ? "sampled" : "exhaustive"},
                                {"property", weak ? "weak" : "boundary"}};
            report["check"] = expander_check_json(result);
            if (!result.certified() && result.result != ExpanderCheck::Result::NoCounterexampleFound)
                code = 1;
        } else if (clo->parsed()) {
            BipartiteGraph g = clo_graph.empty() ? incidence_graph(parse_xor(read_file(clo_xor)))
                                                 : BipartiteGraph::parse(read_file(clo_graph));
            std::vector<int> j_set;
            std::stringstream ss(clo_j);
            std::string item;
            while (std::getline(ss, item, ',')) j_set.push_back(std::stoi(item) - 1);
            ClosureOptions copts;
            copts.exhaustive_limit = clo_limit;
            std::vector<int> cl = closure(g, j_set, clo_r, copts);
            std::vector<int> ext = extension(g, j_set, clo_r, copts);
            report["command"] = "closure";
            json cl_json = json::array(), ext_json = json::array();
            for (int v : cl) cl_json.push_back(v + 1);
            for (int v : ext) ext_json.push_back(v + 1);
            report["closure"] = cl_json;
            report["extension"] = ext_json;
        } else if (cls->parsed()) {
            FormulaStore store;
            LinSystem sys = parse_xor(read_file(cls_xor));
            ClassifyContext ctx(store, sys, cls_params.params(),
                                cls_strict ? ClassifyMode::Strict : ClassifyMode::Permissive);
            Formula f = parse_formula(store, cls_formula);
            Classification result = classify(ctx, f);
            report["command"] = "classify";
            report["formula"] = print_formula(f);
            report["result"] = result.forced ? (result.value ? "forced-1" : "forced-0") : "live";
            report["width_ok"] = result.width_ok;
            report["deviations"] = ctx.deviations();
            if (result.forced) {
                SemanticDerivation cert = forced_axiom_certificate(ctx, f, result.value);
                SemanticCheck sc = check_semantic(cert, certificate_axioms(ctx, f));
                report["certificate_lines"] = cert.lines.size();
                report["certificate_ok"] = sc.ok;
                if (!sc.ok) code = 1;
            }
        } else if (chk->parsed()) {
            FormulaStore store;
            FregeProof proof = load_proof(store, chk_proof, chk_xor, chk_cnf);
            ProofCheck result = check_proof(store, proof);
            report["command"] = "check-proof";
            report["ok"] = result.ok;
            report["pln"] = pln(proof);
            report["psz"] = psz(proof);
            json v = json::array();
            for (const LineViolation& viol : result.violations)
                v.push_back({{"line", viol.line_id},
                             {"rule", rule_name(viol.rule)},
                             {"reason", viol.reason}});
            report["violations"] = v;
            if (!result.ok) code = 1;
        } else if (reg->parsed()) {
            FormulaStore store;
            LinSystem sys = parse_xor(read_file(reg_xor));
            FregeProof proof = load_proof(store, reg_proof, reg_xor, "");
            ThresholdSchedule sched = ThresholdSchedule::make(sys.nvars(), reg_depth);
            RegularizeConfig cfg;
            cfg.params = reg_params.params();
            cfg.mode = reg_strict ? ClassifyMode::Strict : ClassifyMode::Permissive;
            cfg.ignore_extension_budget = reg_ignore_budget;
            cfg.closure_opts.exhaustive_limit = reg_limit;
            RegularizationResult result = regularize(store, proof, sys, sched, cfg);
            report["command"] = "regularize";
            report["config"] = {{"params", params_json(cfg.params)},
                                {"depth", reg_depth},
                                {"mode", reg_strict ? "strict" : "permissive"}};
            report["result"] = regularize_json(store, result, sched);
            if (result.outcome == RegularizationResult::Outcome::BudgetExceeded) code = 2;
            else if (!result.all_assertions_pass()) code = 1;
        } else if (tra->parsed()) {
            FormulaStore store;
            FregeProof proof = load_proof(store, tra_proof, tra_xor, tra_cnf);
            FormulaAssignment sigma = parse_assignment_json(store, read_file(tra_sigma));
            VarAssignment rho;
            bool have_rho = !tra_rho.empty();
            if (have_rho) rho = parse_var_assignment_json(store, read_file(tra_rho));
            TransformResult result =
                transform(store, proof, sigma, have_rho ? &rho : nullptr);
            std::vector<TruthTable> axioms;
            for (Formula f : proof.inputs()) {
                Formula r = f;
                if (have_rho) r = restrict_formula(store, r, rho);
                axioms.push_back(semantic_line_of(restrict_formula(store, r, sigma)));
            }
            for (Formula f : axiom_set(store, sigma)) axioms.push_back(semantic_line_of(f));
            SemanticCheck sc = check_semantic(result.derivation, axioms);
            if (!tra_out.empty())
                write_file(tra_out, derivation_to_jsonl(store, result.derivation));
            report["command"] = "transform";
            report["lines"] = result.derivation.lines.size();
            report["max_width"] = result.max_width;
            report["base_width"] = result.base_width;
            report["width_ratio"] = result.width_ratio;
            report["check_ok"] = sc.ok;
            if (!sc.ok) {
                report["check_failure"] = {{"line", sc.line}, {"reason", sc.reason}};
                code = 1;
            }
        } else if (sat->parsed()) {
            Cnf f = parse_dimacs(read_file(sat_cnf));
            SaturationResult result = resolution_width_saturation(f, sat_width);
            report["command"] = "saturate";
            report["width"] = sat_width;
            report["refutable"] = result.refutable;
            report["derived_clauses"] = result.steps.size();
        } else if (pipe->parsed()) {
            FormulaStore store;
            LinSystem sys = parse_xor(read_file(pipe_xor));
            FregeProof proof = load_proof(store, pipe_proof, pipe_xor, "");
            json stages = json::array();
            bool failed = false;

            ProofCheck pc = check_proof(store, proof);
            stages.push_back({{"stage", "check-proof"}, {"ok", pc.ok}});
            if (!pc.ok) {
                failed = true;
                code = 1;
            }

            ExpanderParams params = pipe_params.params();
            if (!failed) {
                ExpanderCheck strong = is_boundary_expander(incidence_graph(sys), params);
                stages.push_back(
                    {{"stage", "certify"}, {"check", expander_check_json(strong)}});

                ThresholdSchedule sched = ThresholdSchedule::make(sys.nvars(), pipe_depth);
                RegularizeConfig cfg;
                cfg.params = params;
                cfg.mode = pipe_strict ? ClassifyMode::Strict : ClassifyMode::Permissive;
                cfg.ignore_extension_budget = pipe_ignore_budget;
                cfg.closure_opts.exhaustive_limit = pipe_limit;
                RegularizationResult rr = regularize(store, proof, sys, sched, cfg);
                stages.push_back(
                    {{"stage", "regularize"}, {"result", regularize_json(store, rr, sched)}});
                if (rr.outcome == RegularizationResult::Outcome::BudgetExceeded) {
                    failed = true;
                    code = 2;
                } else if (!rr.all_assertions_pass()) {
                    failed = true;
                    code = 1;
                }

                if (!failed) {
                    TransformResult tr = transform(store, proof, rr.sigma, &rr.rho);
                    std::vector<TruthTable> axioms;
                    for (Formula f : proof.inputs())
                        axioms.push_back(semantic_line_of(restrict_formula(
                            store, restrict_formula(store, f, rr.rho), rr.sigma)));
                    for (Formula f : axiom_set(store, rr.sigma))
                        axioms.push_back(semantic_line_of(f));
                    SemanticCheck sc = check_semantic(tr.derivation, axioms);
                    stages.push_back({{"stage", "transform"},
                                      {"lines", tr.derivation.lines.size()},
                                      {"max_width", tr.max_width},
                                      {"width_ratio", tr.width_ratio},
                                      {"check_ok", sc.ok}});
                    if (!sc.ok) {
                        failed = true;
                        code = 1;
                    }

                    // the axioms behind sigma are all derivable from the
                    // restricted system
                    LinSystem restricted = restrict_system(sys, rr.rho_sys);
                    ExpanderParams weakp{params.r, params.degree_cap, params.c / Rational(2)};
                    ClassifyContext ctx(store, restricted, weakp, ClassifyMode::Permissive);
                    bool axioms_ok = true;
                    for (const auto& [d, v] : rr.sigma.pairs()) {
                        SemanticDerivation cert = forced_axiom_certificate(ctx, d, v);
                        SemanticCheck cc = check_semantic(cert, certificate_axioms(ctx, d));
                        if (!cc.ok) axioms_ok = false;
                    }
                    stages.push_back({{"stage", "sigma-axioms-derivable"}, {"ok", axioms_ok}});
                    if (!axioms_ok) {
                        failed = true;
                        code = 1;
                    }

                    json probe = json::array();
                    Cnf enc = cnf_encoding(restricted);
                    int initial_width = 0;
                    for (const Clause& c : enc.clauses)
                        initial_width =
                            std::max(initial_width, static_cast<int>(c.lits.size()));
                    for (int w = initial_width; w <= pipe_probe; ++w) {
                        SaturationResult srr = resolution_width_saturation(enc, w);
                        probe.push_back({{"width", w}, {"refutable", srr.refutable}});
                        if (srr.refutable) break;
                    }
                    stages.push_back({{"stage", "width-probe"}, {"results", probe}});
                }
            }
            report["command"] = "pipeline";
            report["config"] = {{"params", params_json(params)}, {"depth", pipe_depth}};
            report["stages"] = stages;
        }
    } catch (const Error& e) {
        report["error"] = {{"code", error_code_name(e.code())}, {"what", e.what()}};
        code = exit_code_for(e);
    } catch (const std::exception& e) {
        report["error"] = {{"code", "Unexpected"}, {"what", e.what()}};
        code = 3;
    }

    report["timing"] = {{"ms", timer.ms()}};
    emit_report(report, out_path);
    return code;
}
