#include "sasaki_cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "sasaki/sampling.hpp"

namespace sasaki::cli {

namespace {

std::string where(const std::string& file, int line, int column) {
    std::string s = file;
    if (line > 0) s += ":" + std::to_string(line);
    if (column > 0) s += ":" + std::to_string(column);
    return s;
}

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& at, const std::string& message) const {
        const YAML::Mark mark = at.Mark();
        const bool known = mark.line >= 0 && !at.IsNull();
        throw ConfigError(source_, known ? mark.line + 1 : 0, known ? mark.column + 1 : 0, message);
    }

    void only_keys(const YAML::Node& map, std::initializer_list<const char*> keys, const std::string& what) const {
        if (!map.IsMap()) fail(map, what + " must be a mapping");
        const std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& kv : map) {
            const auto key = kv.first.as<std::string>();
            if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "' in " + what);
        }
    }

    template <class T>
    T scalar(const YAML::Node& n, const std::string& what) const {
        try {
            return n.as<T>();
        } catch (const YAML::Exception&) {
            fail(n, what + " has the wrong type");
        }
    }

    std::vector<std::string> strings(const YAML::Node& n, const std::string& what) const {
        if (!n.IsSequence()) fail(n, what + " must be a list");
        std::vector<std::string> out;
        for (const auto& e : n) out.push_back(scalar<std::string>(e, what));
        return out;
    }

    Vec numbers(const YAML::Node& n, const std::string& what) const {
        if (!n.IsSequence()) fail(n, what + " must be a list of numbers");
        Vec out;
        for (const auto& e : n) out.push_back(scalar<double>(e, what));
        return out;
    }

    ExprTable table(const YAML::Node& n, const std::string& what) const {
        if (!n.IsSequence()) fail(n, what + " must be a list of rows");
        ExprTable out;
        for (const auto& row : n) out.push_back(strings(row, what + " row"));
        return out;
    }

    std::vector<Interval> box(const YAML::Node& n, const std::string& what) const {
        if (!n.IsSequence()) fail(n, what + " must be a list of [lo, hi] pairs");
        std::vector<Interval> out;
        for (const auto& iv : n) {
            const Vec v = numbers(iv, what);
            if (v.size() != 2 || !(v[1] > v[0])) fail(iv, what + " entries must be [lo, hi] with lo < hi");
            out.push_back({v[0], v[1]});
        }
        if (out.empty()) fail(n, what + " must not be empty");
        return out;
    }

    FieldConfig field(const YAML::Node& n, const std::string& what) const {
        only_keys(n, {"name", "frame", "components", "expect"}, what);
        FieldConfig f;
        if (n["name"]) f.name = scalar<std::string>(n["name"], what + " name");
        if (n["frame"]) {
            const auto frame = scalar<std::string>(n["frame"], what + " frame");
            if (frame == "natural")
                f.frame = FrameTag::Natural;
            else if (frame == "orthonormal")
                f.frame = FrameTag::Orthonormal;
            else
                fail(n["frame"], "frame must be 'natural' or 'orthonormal'");
        }
        if (!n["components"]) fail(n, what + " needs components");
        f.components = strings(n["components"], what + " components");
        if (const auto e = n["expect"]) {
            static const std::set<std::string> flags{"harmonic_vf", "harmonic_map", "biharmonic_vf", "biharmonic_map",
                                                     "sesqui_vf",   "sesqui_map",   "parallel"};
            if (!e.IsMap()) fail(e, what + " expect must map flag names to true/false");
            for (const auto& kv : e) {
                const auto key = kv.first.as<std::string>();
                if (!flags.count(key)) fail(kv.first, "unknown classification flag '" + key + "'");
                f.expect.emplace_back(key, scalar<bool>(kv.second, "expected flag"));
            }
        }
        return f;
    }

    const std::string& source() const { return source_; }

private:
    std::string source_;
};

ManifoldDefinition inline_manifold(const Reader& rd, const YAML::Node& n) {
    rd.only_keys(n, {"name", "coords", "domain", "metric", "structure", "frame", "params"}, "manifold");
    ManifoldDefinition d;
    d.name = n["name"] ? rd.scalar<std::string>(n["name"], "manifold name") : "inline";
    if (!n["coords"] || !n["domain"] || !n["metric"] || !n["structure"])
        rd.fail(n, "inline manifold needs coords, domain, metric and structure");
    d.coords = rd.strings(n["coords"], "coords");
    d.domain = rd.box(n["domain"], "domain");
    d.metric = rd.table(n["metric"], "metric");
    d.structure = rd.table(n["structure"], "structure");
    if (n["frame"]) d.frame = rd.table(n["frame"], "frame");
    if (n["params"]) {
        if (!n["params"].IsMap()) rd.fail(n["params"], "params must be a mapping name: value");
        for (const auto& kv : n["params"])
            d.params.emplace_back(kv.first.as<std::string>(), rd.scalar<double>(kv.second, "param value"));
    }
    return d;
}

}  // namespace

ConfigError::ConfigError(const std::string& file, int line, int column, const std::string& message)
    : std::runtime_error(where(file, line, column) + ": " + message), file_(file), line_(line), column_(column) {}

RunConfig parse_config(const std::string& text, const std::string& source) {
    const Reader rd(source);
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(source, e.mark.line + 1, e.mark.column + 1, e.msg);
    }
    rd.only_keys(root, {"manifold", "fields", "deltas", "samples", "tol", "quadrature", "variation", "bundle", "examples"},
                 "config");

    RunConfig cfg;
    cfg.source = source;
    const YAML::Node man = root["manifold"];
    if (!man) rd.fail(root, "config needs a manifold");
    if (man.IsScalar()) {
        cfg.manifold_ref = man.as<std::string>();
        try {
            cfg.manifold = builtin_definition(cfg.manifold_ref);
        } catch (const std::invalid_argument& e) {
            rd.fail(man, e.what());
        }
    } else {
        cfg.manifold = inline_manifold(rd, man);
    }

    ChartManifold m = [&] {
        try {
            return cfg.manifold.build();
        } catch (const std::exception& e) {
            rd.fail(man, std::string("manifold: ") + e.what());
        }
    }();

    if (const auto fields = root["fields"]) {
        if (!fields.IsSequence()) rd.fail(fields, "fields must be a list");
        for (const auto& f : fields) {
            FieldConfig fc = rd.field(f, "field");
            if (fc.name.empty()) fc.name = "field" + std::to_string(cfg.fields.size() + 1);
            try {
                build_field(m, fc);
            } catch (const std::exception& e) {
                rd.fail(f, "field '" + fc.name + "': " + e.what());
            }
            cfg.fields.push_back(std::move(fc));
        }
    }

    if (const auto d = root["deltas"]) {
        const Vec v = rd.numbers(d, "deltas");
        if (v.size() != 2) rd.fail(d, "deltas must be [delta1, delta2]");
        cfg.delta1 = v[0];
        cfg.delta2 = v[1];
    }
    if (const auto t = root["tol"]) {
        cfg.tol = rd.scalar<double>(t, "tol");
        if (!(cfg.tol > 0)) rd.fail(t, "tol must be positive");
    }

    if (const auto s = root["samples"]) {
        rd.only_keys(s, {"grid", "random", "box", "points"}, "samples");
        if (s["grid"]) cfg.samples.grid = rd.scalar<int>(s["grid"], "samples grid");
        if (s["random"]) cfg.samples.random = rd.scalar<int>(s["random"], "samples random");
        if (s["box"]) cfg.samples.box = rd.box(s["box"], "samples box");
        if (s["points"]) {
            if (!s["points"].IsSequence()) rd.fail(s["points"], "samples points must be a list");
            for (const auto& p : s["points"]) {
                Vec v = rd.numbers(p, "sample point");
                if (v.size() != static_cast<std::size_t>(m.dim())) rd.fail(p, "sample point has the wrong dimension");
                cfg.samples.points.push_back(std::move(v));
            }
        }
        if (cfg.samples.grid < 0 || cfg.samples.random < 0) rd.fail(s, "sample counts must be non-negative");
        if (!cfg.samples.box.empty() && cfg.samples.box.size() != static_cast<std::size_t>(m.dim()))
            rd.fail(s["box"], "samples box has the wrong dimension");
    } else {
        cfg.samples.grid = 5;
    }

    if (const auto q = root["quadrature"]) {
        rd.only_keys(q, {"points_per_axis", "box"}, "quadrature");
        if (q["points_per_axis"]) cfg.quadrature_points = rd.scalar<int>(q["points_per_axis"], "points_per_axis");
        if (cfg.quadrature_points < 4) rd.fail(q["points_per_axis"], "points_per_axis must be at least 4");
        if (q["box"]) cfg.quadrature_box = rd.box(q["box"], "quadrature box");
        if (!cfg.quadrature_box.empty() && cfg.quadrature_box.size() != static_cast<std::size_t>(m.dim()))
            rd.fail(q["box"], "quadrature box has the wrong dimension");
    }

    if (const auto v = root["variation"]) {
        rd.only_keys(v, {"field", "direction", "bump", "box", "steps"}, "variation");
        VariationConfig vc;
        if (!v["field"] || !v["direction"]) rd.fail(v, "variation needs field and direction");
        vc.field = rd.scalar<std::string>(v["field"], "variation field");
        bool found = false;
        for (const auto& f : cfg.fields) found = found || f.name == vc.field;
        if (!found) rd.fail(v["field"], "variation field '" + vc.field + "' is not defined under fields");
        vc.direction = rd.field(v["direction"], "variation direction");
        if (vc.direction.name.empty()) vc.direction.name = "W";
        try {
            build_field(m, vc.direction);
        } catch (const std::exception& e) {
            rd.fail(v["direction"], std::string("variation direction: ") + e.what());
        }
        if (v["bump"]) {
            vc.bump = rd.scalar<std::string>(v["bump"], "bump");
            try {
                m.parse(vc.bump);
            } catch (const std::exception& e) {
                rd.fail(v["bump"], std::string("bump: ") + e.what());
            }
        }
        if (v["box"]) vc.box = rd.box(v["box"], "variation box");
        if (!vc.box.empty() && vc.box.size() != static_cast<std::size_t>(m.dim()))
            rd.fail(v["box"], "variation box has the wrong dimension");
        if (v["steps"]) {
            vc.steps = rd.numbers(v["steps"], "steps");
            if (vc.steps.empty() || vc.steps.size() > 2) rd.fail(v["steps"], "steps must list one or two step sizes");
            for (double h : vc.steps)
                if (!(h > 0)) rd.fail(v["steps"], "steps must be positive");
        }
        cfg.variation = std::move(vc);
    }

    if (const auto b = root["bundle"]) {
        rd.only_keys(b, {"points"}, "bundle");
        if (b["points"]) cfg.bundle_points = rd.scalar<int>(b["points"], "bundle points");
        if (cfg.bundle_points < 1) rd.fail(b["points"], "bundle points must be positive");
    }
    if (const auto e = root["examples"]) {
        rd.only_keys(e, {"grid"}, "examples");
        if (e["grid"]) cfg.example_grid = rd.scalar<int>(e["grid"], "examples grid");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, 0, "cannot read config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

RunConfig default_config(const std::string& builtin) {
    RunConfig cfg;
    cfg.source = "<builtin " + builtin + ">";
    cfg.manifold_ref = builtin;
    cfg.manifold = builtin_definition(builtin);
    cfg.samples.grid = 5;
    return cfg;
}

ChartManifold build_manifold(const RunConfig& cfg) { return cfg.manifold.build(); }

VectorFieldSpec build_field(const ChartManifold& m, const FieldConfig& f) {
    return VectorFieldSpec::parse(m, f.components, f.frame, f.name);
}

std::vector<Vec> sample_points(const RunConfig& cfg, const ChartManifold& m, std::uint64_t seed) {
    const std::vector<Interval> box = cfg.samples.box.empty() ? m.domain() : cfg.samples.box;
    std::vector<Vec> out = cfg.samples.points;
    if (cfg.samples.grid > 0)
        for (auto& p : grid_points(box, cfg.samples.grid)) out.push_back(std::move(p));
    if (cfg.samples.random > 0)
        for (auto& p : random_points(box, cfg.samples.random, seed)) out.push_back(std::move(p));
    return out;
}

std::string manifold_yaml(const ManifoldDefinition& def) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << def.name;
    out << YAML::Key << "coords" << YAML::Value << YAML::Flow << def.coords;
    out << YAML::Key << "domain" << YAML::Value << YAML::BeginSeq;
    for (const auto& iv : def.domain) out << YAML::Flow << std::vector<double>{iv.lo, iv.hi};
    out << YAML::EndSeq;
    auto table = [&](const char* key, const ExprTable& t) {
        out << YAML::Key << key << YAML::Value << YAML::BeginSeq;
        for (const auto& row : t) out << YAML::Flow << row;
        out << YAML::EndSeq;
    };
    table("metric", def.metric);
    table("structure", def.structure);
    if (!def.frame.empty()) table("frame", def.frame);
    if (!def.params.empty()) {
        out << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
        for (const auto& [k, v] : def.params) out << YAML::Key << k << YAML::Value << v;
        out << YAML::EndMap;
    }
    out << YAML::EndMap;
    return out.c_str();
}

}  // namespace sasaki::cli
