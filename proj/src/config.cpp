#include "llb/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "llb/expression.hpp"

namespace llb {

namespace {

[[noreturn]] void fail(const std::string& origin, const YAML::Node& node, const std::string& msg) {
  std::ostringstream os;
  os << origin;
  if (node.IsDefined() && node.Mark().line >= 0) os << ":" << node.Mark().line + 1;
  os << ": " << msg;
  throw ConfigError(os.str());
}

class Section {
 public:
  Section(const YAML::Node& node, std::string path, const std::string& origin)
      : node_(node.IsDefined() ? node : YAML::Node()), path_(std::move(path)), origin_(origin) {
    if (node_.IsDefined() && !node_.IsNull() && !node_.IsMap())
      fail(origin_, node_, "'" + path_ + "' must be a mapping");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.IsMap() && cnode()[key].IsDefined() && !cnode()[key].IsNull();
  }
  YAML::Node raw(const std::string& key) {
    seen_.insert(key);
    if (!node_.IsMap()) return YAML::Node();
    const YAML::Node n = cnode()[key];
    return n.IsDefined() ? n : YAML::Node();
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return as<T>(cnode()[key], key);
  }
  template <typename T>
  T require(const std::string& key) {
    if (!has(key)) fail(origin_, node_, "missing key '" + path_ + "." + key + "'");
    return as<T>(cnode()[key], key);
  }
  template <typename T>
  T as(const YAML::Node& n, const std::string& key) {
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(origin_, n, "bad value for '" + path_ + "." + key + "'");
    }
  }

  Section child(const std::string& key) { return Section(raw(key), path_ + "." + key, origin_); }

  /// Rejects keys that were never queried.
  void finish() const {
    if (!node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) fail(origin_, kv.first, "unknown key '" + path_ + "." + key + "'");
    }
  }

  const YAML::Node& node() const { return node_; }
  const YAML::Node& cnode() const { return node_; }
  const std::string& origin() const { return origin_; }

 private:
  YAML::Node node_;
  std::string path_;
  const std::string& origin_;
  std::set<std::string> seen_;
};

Vec3d vec3(Section& s, const YAML::Node& n, const std::string& key) {
  const auto v = s.as<std::vector<double>>(n, key);
  if (v.size() != 3) fail(s.origin(), n, "'" + key + "' must have 3 components");
  return {v[0], v[1], v[2]};
}

FieldExpression field_expr(Section s, int dim) {
  FieldExpression e;
  if (s.has("constant")) e.constant = vec3(s, s.raw("constant"), "constant");
  if (s.has("cosines")) {
    const auto list = s.raw("cosines");
    if (!list.IsSequence()) fail(s.origin(), list, "'cosines' must be a list");
    for (const auto& item : list) {
      Section t(item, "cosines[]", s.origin());
      CosineTerm term;
      const auto k = t.require<std::vector<int>>("k");
      if (k.empty() || k.size() > 2 || k[0] < 0 || (k.size() == 2 && k[1] < 0))
        fail(s.origin(), item, "'k' must be 1 or 2 nonnegative wavenumbers");
      if (dim == 1 && k.size() == 2 && k[1] != 0)
        fail(s.origin(), item, "second wavenumber must be 0 in 1D");
      term.k1 = k[0];
      term.k2 = k.size() == 2 ? k[1] : 0;
      term.amplitude = vec3(t, t.raw("amplitude"), "amplitude");
      t.finish();
      e.terms.push_back(term);
    }
  }
  s.finish();
  return e;
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError(origin + ":1: config must be a mapping");

  RunConfig cfg;
  cfg.source = text;
  Section top(root, "", origin);
  try {
    {
      auto g = top.child("grid");
      const int dim = g.get<int>("dim", 1);
      const int modes = g.require<int>("modes");
      const int colloc = g.get<int>("colloc", 2 * modes);
      g.finish();
      try {
        cfg.grid = build_grid<double>(dim, modes, colloc);
      } catch (const std::invalid_argument& e) {
        fail(origin, g.node(), e.what());
      }
    }
    {
      auto p = top.child("physics");
      auto& k = cfg.solver.coefficients;
      k.exchange = p.get<double>("exchange", 1.0);
      k.gyro = p.get<double>("gyro", 1.0);
      k.damping = p.get<double>("damping", 1.0);
      k.cubic = p.get<double>("cubic", 1.0);
      if (p.has("h")) cfg.h = field_expr(p.child("h"), cfg.grid->dim());
      if (p.has("m0")) cfg.m0 = field_expr(p.child("m0"), cfg.grid->dim());
      auto mm = p.child("marcus");
      const auto mode = mm.get<std::string>("mode", "closed_form");
      if (mode == "closed_form") cfg.marcus_mode = MarcusMode::closed_form;
      else if (mode == "rk4") cfg.marcus_mode = MarcusMode::rk4;
      else fail(origin, mm.raw("mode"), "marcus.mode must be closed_form or rk4");
      cfg.marcus_step = mm.get<double>("rk4_step", 1e-3);
      mm.finish();
      p.finish();
    }
    {
      auto n = top.child("noise");
      const bool atoms = n.has("atoms");
      const bool density = n.has("density");
      if (atoms && density) fail(origin, n.node(), "noise: give either atoms or density");
      if (atoms) {
        std::vector<Atom> list;
        for (const auto& item : n.raw("atoms")) {
          Section a(item, "noise.atoms[]", origin);
          list.push_back({a.require<double>("l"), a.require<double>("w")});
          a.finish();
        }
        try {
          cfg.nu = LevyMeasure(list);
        } catch (const std::invalid_argument& e) {
          fail(origin, n.raw("atoms"), e.what());
        }
        cfg.noise_description = {{"atoms", list.size()}};
      } else if (density) {
        const auto text_expr = n.require<std::string>("density");
        const int nodes = n.get<int>("quadrature_nodes", 32);
        try {
          const auto expr = Expression::parse(text_expr, "l");
          cfg.nu = LevyMeasure::from_density([&](double l) { return expr(l); }, nodes);
        } catch (const std::invalid_argument& e) {
          fail(origin, n.raw("density"), e.what());
        }
        cfg.noise_description = {{"density", text_expr}, {"quadrature_nodes", nodes}};
      } else {
        cfg.noise_description = {{"atoms", 0}};
      }
      n.finish();
    }
    {
      auto s = top.child("solver");
      auto& sc = cfg.solver;
      sc.grid = cfg.grid;
      sc.horizon = s.get<double>("T", 1.0);
      sc.dt = s.get<double>("dt", 1e-3);
      sc.eps = s.get<double>("eps", 1.0);
      const auto scheme = s.get<std::string>("scheme", "etd1");
      if (scheme == "etd1") sc.scheme = Scheme::etd1;
      else if (scheme == "imex_euler") sc.scheme = Scheme::imex_euler;
      else fail(origin, s.raw("scheme"), "solver.scheme must be etd1 or imex_euler");
      sc.snapshot_stride = s.get<int>("snapshot_stride", 1);
      sc.blowup_guard = s.get<double>("blowup_guard", 1e6);
      sc.seed = s.get<std::uint64_t>("seed", 0);
      s.finish();
      try {
        sc.validate();
      } catch (const std::invalid_argument& e) {
        fail(origin, s.node(), e.what());
      }
    }
    {
      auto c = top.child("control");
      const int cells = c.get<int>("cells", 4);
      const int atoms = static_cast<int>(cfg.nu.size());
      if (cells < 1) fail(origin, c.node(), "control.cells must be >= 1");
      if (c.has("values")) {
        const auto rows = c.as<std::vector<std::vector<double>>>(c.raw("values"), "values");
        if (static_cast<int>(rows.size()) != cells)
          fail(origin, c.raw("values"), "control.values needs one row per cell");
        Eigen::MatrixXd v(cells, atoms);
        for (int m = 0; m < cells; ++m) {
          if (static_cast<int>(rows[m].size()) != atoms)
            fail(origin, c.raw("values"), "control.values rows need one entry per atom");
          for (int j = 0; j < atoms; ++j) v(m, j) = rows[m][j];
        }
        std::vector<double> edges;
        for (int m = 0; m <= cells; ++m) edges.push_back(cfg.solver.horizon * m / cells);
        try {
          cfg.control = Control(edges, v);
        } catch (const std::invalid_argument& e) {
          fail(origin, c.raw("values"), e.what());
        }
      } else {
        cfg.control = Control::constant(cfg.solver.horizon, cells, atoms, c.get<double>("value", 1.0));
      }
      c.finish();
    }
    {
      auto e = top.child("experiment");
      auto& x = cfg.experiment;
      x.master_seed = e.get<std::uint64_t>("master_seed", x.master_seed);
      x.n_paths = e.get<int>("n_paths", x.n_paths);
      x.eps_list = e.get<std::vector<double>>("eps_list", x.eps_list);
      x.stop_factor = e.get<double>("stop_factor", x.stop_factor);
      if (e.has("stop_level")) x.stop_level = e.require<double>("stop_level");
      x.identity_samples = e.get<int>("identity_samples", x.identity_samples);
      x.lipschitz_samples = e.get<int>("lipschitz_samples", x.lipschitz_samples);
      {
        auto t = e.child("target");
        x.target.kind = t.get<std::string>("kind", x.target.kind);
        x.target.center = t.get<std::string>("center", x.target.center);
        x.target.radius = t.get<double>("radius", x.target.radius);
        if (x.target.kind != "near" && x.target.kind != "outside_ball")
          fail(origin, t.raw("kind"), "target.kind must be near or outside_ball");
        if (x.target.center != "skeleton" && x.target.center != "m0" && x.target.center != "zero")
          fail(origin, t.raw("center"), "target.center must be skeleton, m0 or zero");
        t.finish();
      }
      {
        auto r = e.child("rate");
        auto& o = x.rate;
        o.cells = r.get<int>("cells", o.cells);
        o.initial_penalty = r.get<double>("initial_penalty", o.initial_penalty);
        o.penalty_growth = r.get<double>("penalty_growth", o.penalty_growth);
        o.outer_iterations = r.get<int>("outer_iterations", o.outer_iterations);
        o.max_sweeps = r.get<int>("max_sweeps", o.max_sweeps);
        o.initial_step = r.get<double>("initial_step", o.initial_step);
        o.min_step = r.get<double>("min_step", o.min_step);
        r.finish();
      }
      {
        auto l = e.child("ldp");
        x.ldp_radii = l.get<std::vector<double>>("radii", x.ldp_radii);
        x.ldp_margin = l.get<double>("margin", x.ldp_margin);
        l.finish();
      }
      x.galerkin_levels = e.get<std::vector<int>>("galerkin_levels", x.galerkin_levels);
      if (x.n_paths < 1) fail(origin, e.raw("n_paths"), "n_paths must be >= 1");
      e.finish();
    }
    top.finish();
  } catch (const YAML::Exception& e) {
    throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str(), path);
}

}  // namespace llb
