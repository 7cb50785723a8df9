#include "sasaki_cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sasaki/bundle.hpp"
#include "sasaki/functionals.hpp"
#include "sasaki/geometry.hpp"
#include "sasaki/paperlab.hpp"
#include "sasaki/structure.hpp"
#include "sasaki/variational.hpp"

namespace sasaki::cli {

using json = nlohmann::ordered_json;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json tensor_json(const RealTensor& t) {
    if (t.rank() == 0 || t.empty()) return json::array();
    // Build nested arrays rank levels deep.
    std::vector<std::size_t> shape(static_cast<std::size_t>(t.rank()), static_cast<std::size_t>(t.dim()));
    auto build = [&](auto&& self, std::size_t level, std::size_t offset) -> json {
        json a = json::array();
        std::size_t stride = 1;
        for (std::size_t l = level + 1; l < shape.size(); ++l) stride *= shape[l];
        for (std::size_t i = 0; i < shape[level]; ++i) {
            if (level + 1 == shape.size())
                a.push_back(t.flat(offset + i));
            else
                a.push_back(self(self, level + 1, offset + i * stride));
        }
        return a;
    };
    return build(build, 0, 0);
}

json conventions_json() {
    const Conventions c = conventions();
    return json{{"curvature", c.curvature},
                {"laplacian", c.laplacian},
                {"rough_laplacian", c.rough_laplacian},
                {"trace", c.trace},
                {"bundle_reading", c.bundle_reading}};
}

double tol_of(const RunConfig& cfg, const Options& opt) { return opt.tol.value_or(cfg.tol); }

void add_check(Outcome& o, std::string section, std::string name, double value, double tol, bool pass) {
    o.checks.push_back({std::move(section), std::move(name), value, tol, pass});
}

// -- commands ---------------------------------------------------------------

void cmd_validate(const RunConfig& cfg, const Options& opt, Outcome& o) {
    const ChartManifold m = build_manifold(cfg);
    const auto pts = sample_points(cfg, m, opt.seed);
    const StructureReport rep = validate_structure(m, pts, tol_of(cfg, opt));
    json checks = json::array();
    for (const auto& c : rep.checks) {
        checks.push_back({{"name", c.name}, {"value", c.value}, {"worst_point", c.worst_point}, {"margin", c.margin}, {"pass", c.pass}});
        add_check(o, "validate", c.name, c.value, rep.tol, c.pass);
    }
    o.report["results"]["validate"] = {{"points", rep.points}, {"tol", rep.tol}, {"checks", checks}, {"pass", rep.all_pass()}};
}

void cmd_tensors(const RunConfig& cfg, const Options& opt, Outcome& o) {
    const ChartManifold m = build_manifold(cfg);
    const auto pts = sample_points(cfg, m, opt.seed);
    json points = json::array();
    if (o.csv_header.empty()) o.csv_header = {"point", "coords", "tensor", "index", "value"};
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const GeometryAtPoint g = curvature_cov_deriv(m, pts[k]);
        points.push_back({{"point", g.p},
                          {"g", tensor_json(g.g)},
                          {"det_g", g.det_g},
                          {"gamma", tensor_json(g.gamma)},
                          {"riemann", tensor_json(g.curvature)},
                          {"nabla_riemann", tensor_json(g.nabla_R)}});
        std::string coords;
        for (double x : g.p) coords += (coords.empty() ? "" : " ") + num(x);
        for (const auto& [name, t] : {std::pair<const char*, const RealTensor*>{"gamma", &g.gamma}, {"riemann", &g.curvature},
                                      {"nabla_riemann", &g.nabla_R}}) {
            for (std::size_t f = 0; f < t->size(); ++f) {
                if (t->flat(f) == 0.0) continue;
                std::string idx;
                for (int i : t->unflatten(f)) idx += std::to_string(i);
                o.csv_rows.push_back({std::to_string(k), coords, name, idx, num(t->flat(f))});
            }
        }
    }
    o.report["results"]["tensors"] = {{"layout",
                                       {{"gamma", "gamma[k][i][j] = Gamma^k_ij"},
                                        {"riemann", "riemann[l][k][i][j] = R^l_kij, R(d_i, d_j) d_k = R^l_kij d_l"},
                                        {"nabla_riemann", "nabla_riemann[l][m][k][i][j] = (nabla_m R)^l_kij"}}},
                                      {"points", points}};
}

void cmd_bundle(const RunConfig& cfg, const Options& opt, Outcome& o) {
    const ChartManifold m = build_manifold(cfg);
    const auto sample = random_bundle_points(m, cfg.bundle_points, opt.seed);
    const OracleReport rep = verify_structural_vs_direct(m, sample, tol_of(cfg, opt), opt.seed);
    json cases = json::array();
    for (const auto& c : rep.cases) {
        cases.push_back({{"name", c.name}, {"max_residual", c.max_residual}, {"worst_point", {{"p", c.worst_point.p}, {"v", c.worst_point.v}}}});
        add_check(o, "bundle-check", c.name, c.max_residual, rep.tol, c.max_residual < rep.tol);
    }
    o.report["results"]["bundle_check"] = {{"points", rep.points},
                                           {"tol", rep.tol},
                                           {"cases", cases},
                                           {"readings", {{"phi_v", rep.phi_v_residual}, {"plain_v", rep.plain_v_residual}}},
                                           {"winning_reading", to_string(rep.winning_reading)},
                                           {"pass", rep.pass()}};
}

void cmd_classify(const RunConfig& cfg, const Options& opt, Outcome& o) {
    const ChartManifold m = build_manifold(cfg);
    const auto pts = sample_points(cfg, m, opt.seed);
    const double tol = tol_of(cfg, opt);
    json fields = json::array();
    const std::vector<std::string> header{"field", "point", "coords", "tau_h", "tau_w", "tau2_h", "tau2_w", "sesqui_h", "sesqui_w", "nabla_xi"};
    for (const auto& fc : cfg.fields) {
        const VectorFieldSpec xi = build_field(m, fc);
        const ClassificationReport rep = classify(m, xi, pts, cfg.delta1, cfg.delta2, tol);
        json flags = json::object(), residuals = json::object();
        for (const auto& c : rep.criteria) {
            flags[c.name] = c.flag;
            residuals[c.name] = c.max_residual;
        }
        json expected = json::object();
        for (const auto& [name, want] : fc.expect) {
            expected[name] = want;
            add_check(o, "classify", fc.name + " " + name + " = " + (want ? "true" : "false"), rep.get(name).max_residual, tol,
                      rep.flag(name) == want);
        }
        fields.push_back({{"name", fc.name}, {"flags", flags}, {"max_residual", residuals}, {"expected", expected}});

        o.csv_header = header;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const TensionReport t = tension_report(m, xi, pts[k], cfg.delta1, cfg.delta2);
            std::string coords;
            for (double x : pts[k]) coords += (coords.empty() ? "" : " ") + num(x);
            o.csv_rows.push_back({fc.name, std::to_string(k), coords, num(sup_norm(t.tau.h)), num(sup_norm(t.tau.w)),
                                  num(sup_norm(t.tau2.h)), num(sup_norm(t.tau2.w)), num(sup_norm(t.sesqui.h)),
                                  num(sup_norm(t.sesqui.w)), num(sup_norm(t.nabla_xi))});
        }
    }
    o.report["results"]["classify"] = {{"points", pts.size()},
                                       {"tol", tol},
                                       {"deltas", {cfg.delta1, cfg.delta2}},
                                       {"residual_norm", "coordinate sup-norm over the sample"},
                                       {"fields", fields}};
}

void cmd_variation(const RunConfig& cfg, const Options&, Outcome& o) {
    if (!cfg.variation) throw ConfigError(cfg.source, 0, 0, "the variation command needs a variation section");
    const ChartManifold m = build_manifold(cfg);
    const VariationConfig& vc = *cfg.variation;
    const auto it = std::find_if(cfg.fields.begin(), cfg.fields.end(), [&](const FieldConfig& f) { return f.name == vc.field; });
    const VectorFieldSpec xi = build_field(m, *it);
    const std::vector<Interval> qbox = cfg.quadrature_box.empty() ? m.domain() : cfg.quadrature_box;
    const std::vector<Interval> vbox = vc.box.empty() ? qbox : vc.box;

    VariationSpec var{build_field(m, vc.direction), vc.bump.empty() ? default_bump(m, vbox) : m.parse(vc.bump), vbox, vc.steps};
    const EnergyReport er = energy_report(m, xi, {qbox, cfg.quadrature_points}, cfg.delta1, cfg.delta2);
    const VariationReport vr = first_variation_check(m, xi, var, cfg.delta1, cfg.delta2, cfg.quadrature_points);

    auto energies = [](const Energies& e) {
        return json{{"E", e.E}, {"E2", e.E2}, {"E_delta", e.E_delta}, {"volume", e.volume}};
    };
    const double identity = std::abs(er.coarse.E_delta - (2 * cfg.delta1 * er.coarse.E + 2 * cfg.delta2 * er.coarse.E2));
    o.report["results"]["variation"] = {
        {"field", it->name},
        {"deltas", {cfg.delta1, cfg.delta2}},
        {"functionals",
         {{"box", [&] {
               json b = json::array();
               for (const auto& iv : qbox) b.push_back({iv.lo, iv.hi});
               return b;
           }()},
          {"points_per_axis", er.points_per_axis},
          {"values", energies(er.coarse)},
          {"refined", energies(er.fine)},
          {"max_rel_change", er.max_rel_change},
          {"linear_combination_residual", identity}}},
        {"first_variation",
         {{"steps", vr.steps},
          {"stencil", vr.stencil},
          {"lhs", vr.lhs},
          {"rhs", vr.rhs},
          {"rhs_phi_form", vr.rhs_phi_form},
          {"mismatch", vr.mismatch},
          {"boundary_leakage", vr.boundary_leakage},
          {"roundoff_estimate", vr.roundoff_estimate},
          {"bienergy", {{"lhs", vr.lhs_bienergy}, {"single", vr.bienergy_single}, {"doubled", vr.bienergy_doubled},
                        {"normalization", vr.bienergy_normalization}}}}},
        {"warnings", [&] {
             json w = json::array();
             for (const auto& s : er.warnings) w.push_back(s);
             for (const auto& s : vr.warnings) w.push_back(s);
             return w;
         }()}};
    add_check(o, "variation", "first variation: |lhs - rhs| / (1 + |rhs|)", vr.mismatch, 1e-3, vr.mismatch < 1e-3);
    add_check(o, "variation", "phi-twisted pairing equals g^phi pairing", std::abs(vr.rhs - vr.rhs_phi_form), 1e-10,
              std::abs(vr.rhs - vr.rhs_phi_form) < 1e-10 * (1 + std::abs(vr.rhs)));
    add_check(o, "variation", "E_delta = 2 delta1 E + 2 delta2 E2", identity, 1e-12, identity < 1e-12 * (1 + std::abs(er.coarse.E_delta)));
    add_check(o, "variation", "quadrature converged under refinement", er.max_rel_change, 1e-4, er.max_rel_change < 1e-4);
    add_check(o, "variation", "bump * W vanishes on the support boundary", vr.boundary_leakage, 1e-12, vr.boundary_leakage < 1e-12);
}

void cmd_reproduce(const RunConfig& cfg, const std::vector<std::string>& args, Outcome& o) {
    const std::vector<std::string> names = args.empty() ? example_names() : args;
    json examples = json::array();
    for (const auto& name : names) {
        const ExampleReport rep = reproduce_example(name, cfg.example_grid);
        json rows = json::array();
        for (const auto& r : rep.rows) {
            rows.push_back({{"claim", r.claim}, {"max_residual", r.max_residual}, {"tol", r.tol}, {"verdict", r.pass ? "pass" : "fail"},
                            {"detail", r.detail}});
            add_check(o, "reproduce " + name, r.claim, r.max_residual, r.tol, r.pass);
        }
        examples.push_back({{"example", name}, {"manifold", rep.manifold}, {"points", rep.points}, {"rows", rows}, {"pass", rep.all_pass()}});
    }
    o.report["results"]["reproduce"] = examples;
}

}  // namespace

bool Outcome::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Outcome execute(const std::string& command, const std::vector<std::string>& args, const RunConfig& cfg, const Options& opt) {
    Outcome o;
    o.report["command"] = command;
    o.report["manifold"] = cfg.manifold.name;
    o.report["conventions"] = conventions_json();
    o.report["results"] = json::object();

    if (command == "validate")
        cmd_validate(cfg, opt, o);
    else if (command == "tensors")
        cmd_tensors(cfg, opt, o);
    else if (command == "bundle-check")
        cmd_bundle(cfg, opt, o);
    else if (command == "classify")
        cmd_classify(cfg, opt, o);
    else if (command == "variation")
        cmd_variation(cfg, opt, o);
    else if (command == "reproduce")
        cmd_reproduce(cfg, args, o);
    else if (command == "all") {
        cmd_validate(cfg, opt, o);
        cmd_bundle(cfg, opt, o);
        if (!cfg.fields.empty()) cmd_classify(cfg, opt, o);
        if (cfg.variation) cmd_variation(cfg, opt, o);
        cmd_reproduce(cfg, args, o);
    } else {
        throw std::invalid_argument("unknown subcommand '" + command + "'");
    }

    json checks = json::array();
    for (const auto& c : o.checks)
        checks.push_back({{"section", c.section}, {"name", c.name}, {"value", c.value}, {"tol", c.tol}, {"pass", c.pass}});
    o.report["checks"] = checks;
    o.report["pass"] = o.pass();
    o.report["meta"] = {{"tool", "sasaki"}, {"version", "0.1.0"}, {"config", cfg.source}, {"seed", opt.seed}};
    return o;
}

std::string format_table(const std::vector<Check>& checks) {
    std::size_t wsec = 7, wname = 5;
    for (const auto& c : checks) {
        wsec = std::max(wsec, c.section.size());
        wname = std::max(wname, c.name.size());
    }
    std::ostringstream out;
    char buf[64];
    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); };
    out << pad("section", wsec) << "  " << pad("claim", wname) << "  " << pad("residual", 12) << "  " << pad("tol", 9) << "  verdict\n";
    for (const auto& c : checks) {
        std::snprintf(buf, sizeof buf, "%.3e", c.value);
        out << pad(c.section, wsec) << "  " << pad(c.name, wname) << "  " << pad(buf, 12) << "  ";
        std::snprintf(buf, sizeof buf, "%.0e", c.tol);
        out << pad(buf, 9) << "  " << (c.pass ? "PASS" : "FAIL") << "\n";
    }
    return out.str();
}

std::string format_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    };
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << quote(r[i]);
        out << "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out.str();
}

int run(const std::string& command, const std::vector<std::string>& args, const RunConfig& cfg, const Options& opt,
        std::ostream& out) {
    Outcome o = execute(command, args, cfg, opt);
    // Commands without a sweep print their checks as CSV.
    std::vector<std::string> header = o.csv_header;
    std::vector<std::vector<std::string>> rows = o.csv_rows;
    if (header.empty()) {
        header = {"section", "claim", "residual", "tol", "verdict"};
        for (const auto& c : o.checks) rows.push_back({c.section, c.name, num(c.value), num(c.tol), c.pass ? "pass" : "fail"});
    }

    switch (opt.format) {
        case Format::Json: out << o.report.dump(2) << "\n"; break;
        case Format::Csv: out << format_csv(header, rows); break;
        case Format::Table:
            out << format_table(o.checks) << (o.pass() ? "all checks pass\n" : "some checks FAIL\n");
            break;
    }

    if (!opt.out_dir.empty()) {
        std::filesystem::create_directories(opt.out_dir);
        std::ofstream(std::filesystem::path(opt.out_dir) / "report.json") << o.report.dump(2) << "\n";
        if (!o.csv_rows.empty()) std::ofstream(std::filesystem::path(opt.out_dir) / "sweep.csv") << format_csv(o.csv_header, o.csv_rows);
    }
    return o.pass() ? 0 : 1;
}

}  // namespace sasaki::cli
