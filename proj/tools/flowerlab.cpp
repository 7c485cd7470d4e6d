// flowerlab command-line front end. Bodies travel as JSON files (see
// flowerlab/io.hpp); reports go to stdout as JSON, tables to --report as CSV.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flowerlab/calculus.hpp"
#include "flowerlab/inversion.hpp"
#include "flowerlab/io.hpp"
#include "flowerlab/localtheory.hpp"
#include "flowerlab/mixedvol.hpp"
#include "flowerlab/svg.hpp"

using namespace flowerlab;

namespace {

struct Globals {
  int grid = kDefaultGridSize;
  std::string seed_text;
  double tol = 1e-6;
  std::string out;
  std::string report;

  std::uint64_t seed() const {
    std::string s = seed_text;
    if (s.empty())
      if (const char* env = std::getenv("FLOWERLAB_SEED")) s = env;
    if (s.empty()) return 0;
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw CLI::ValidationError("--seed", "not an unsigned integer: " + s);
    }
  }

  Json echo(const std::string& command) const {
    Json m;
    m["command"] = command;
    m["grid"] = grid;
    m["seed"] = seed();
    m["tol"] = tol;
    return m;
  }
};

Globals g;

// Grid for a file: its own, or the default for its dimension.
GridRef grid_of(const BodyFile& b) {
  if (b.grid) return b.grid->build();
  if (b.dim == 2) return uniform_angle_grid(g.grid);
  return sampled_sphere_grid(b.dim, g.grid + (g.grid % 2), derive_seed(g.seed(), 0x9e1d), true);
}

Flower flower_of_file(const BodyFile& b) {
  if (b.representation == Representation::Petals) return flower_from_petals(b.points, grid_of(b));
  if (b.representation == Representation::Support) return flower_of(convex_of(b, grid_of(b)));
  return Flower::from_radial(star_of(b, grid_of(b)));
}

ConvexBody convex_of_file(const BodyFile& b) {
  if (b.representation == Representation::Support) return convex_of(b, grid_of(b));
  if (b.representation == Representation::Petals) return core_of(flower_of_file(b));
  throw Error(ErrorKind::RepresentationRequired, "expected a support or petals body, got " + to_string(b.representation));
}

StarBody star_of_file(const BodyFile& b) {
  switch (b.representation) {
    case Representation::Radial: return star_of(b, grid_of(b));
    case Representation::Support: return convex_of(b, grid_of(b)).as_star();
    case Representation::Petals: return flower_of_file(b).body();
    default: throw Error(ErrorKind::RepresentationRequired, "polytope files have no radial function");
  }
}

void emit_body(BodyFile b) { serialize_body(b, g.out); }

void emit_json(const Json& j) { write_text(g.out, j.dump(2) + "\n"); }

void emit_report(const std::string& csv) {
  if (!g.report.empty()) write_text(g.report, csv);
}

std::string csv_number(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

std::vector<Vector> parse_points(const std::string& text) {
  std::vector<Vector> pts;
  std::stringstream all(text);
  std::string item;
  while (std::getline(all, item, ';')) {
    std::vector<double> c;
    std::stringstream one(item);
    std::string num;
    while (std::getline(one, num, ',')) c.push_back(std::stod(num));
    if (c.empty()) continue;
    pts.push_back(Eigen::Map<Vector>(c.data(), static_cast<Eigen::Index>(c.size())));
  }
  if (pts.empty()) throw CLI::ValidationError("--points", "no points given");
  for (const auto& p : pts)
    if (p.size() != pts.front().size()) throw CLI::ValidationError("--points", "points differ in dimension");
  return pts;
}

std::string label_of(const BodyFile& b, const std::string& path) {
  if (auto it = b.metadata.find("label"); it != b.metadata.end() && it->is_string()) return it->get<std::string>();
  return std::filesystem::path(path).filename().string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flowerlab: flowers, cores and their calculus on sampled spheres"};
  app.require_subcommand(1);
  app.add_option("--grid", g.grid, "grid size N for bodies without a grid")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed_text, "master seed (falls back to FLOWERLAB_SEED)");
  app.add_option("--tol", g.tol, "convergence tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output path (default stdout)");
  app.add_option("--report", g.report, "CSV report path");

  std::vector<std::string> inputs;
  double lambda = 0.5;
  double scale = 1.0;
  int k_dim = 2, trials = 200, n_rot = 256, dim = 2, petal_count = 0, samples = 400, subgrid = 4096;
  std::string mode = "flower", coefficients, shape, points;
  double radius = 1.0, half = 1.0, ea = 1.0, eb = 0.5, thickness = 0.02;
  int sides = 6;
  bool out_cone = false;

  auto sub = [&](const char* name, const char* help, int n_in) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    if (n_in > 0) s->add_option("inputs", inputs, "input body files ('-' for stdin)")->expected(n_in)->required();
    if (n_in < 0) s->add_option("inputs", inputs, "input body files")->expected(1, 64)->required();
    return s;
  };

  auto* c_flower = sub("flower", "flower of a core (support or petals file)", 1);
  auto* c_core = sub("core", "core of a flower (radial or petals file)", 1);
  auto* c_cof = sub("cof", "radial reciprocal of a star body", 1);
  auto* c_polar = sub("polar", "polar body", 1);
  auto* c_alex = sub("alexandrov", "Alexandrov body of support values g", 1);
  auto* c_power = sub("power", "power map K^lambda", 1);
  c_power->add_option("--lambda", lambda, "exponent")->required();
  auto* c_fmap = sub("fmap", "naive map conv{scale * r^lambda}", 1);
  c_fmap->add_option("--lambda", lambda, "exponent");
  c_fmap->add_option("--scale", scale, "factor")->check(CLI::PositiveNumber);
  auto* c_compose = sub("compose", "T o K", 2);
  auto* c_rcompose = sub("rcompose", "radial composition r_T(K)", 2);
  auto* c_logmean = sub("logmean", "logarithmic mean of K and T", 2);
  c_logmean->add_option("--lambda", lambda, "weight of T")->required();
  auto* c_mixed = sub("mixedvol", "flower mixed volume of dim bodies", -1);
  c_mixed->add_option("--coefficients", coefficients, "comma separated weights: run the expansion check instead");
  auto* c_volume = sub("volume", "volume of a body", 1);
  auto* c_invert = sub("invert", "is the inversion of a polytope convex", 1);
  c_invert->add_option("--samples", samples, "arc-criterion pairs")->check(CLI::Range(100, 1000000));
  auto* c_stab = sub("stability", "stability check of a symmetric flower", 1);
  auto* c_dvor = sub("dvoretzky", "projection search over random subspaces", 1);
  c_dvor->add_option("--k", k_dim, "subspace dimension")->required();
  c_dvor->add_option("--trials", trials, "number of subspaces")->check(CLI::PositiveNumber);
  c_dvor->add_option("--subgrid", subgrid, "grid size inside E")->check(CLI::Range(32, 1 << 20));
  auto* c_gavg = sub("global-avg", "oscillation of averaged random rotations", 1);
  c_gavg->add_option("--n-rot", n_rot, "number of rotations")->check(CLI::PositiveNumber);
  auto* c_kashin = sub("kashin", "average of randomly rotated petals", 0);
  c_kashin->add_option("--dim", dim, "ambient dimension")->required();
  c_kashin->add_option("--petals", petal_count, "petal count (default 2*dim)");
  auto* c_bm = sub("bm-probe", "Brunn-Minkowski probe for T o (K1 + K2)", 3);
  c_bm->add_option("--mode", mode, "flower | radial")->check(CLI::IsMember({"flower", "radial"}));
  auto* c_plot = sub("plot", "SVG of 2D bodies", -1);
  auto* c_make = sub("make", "write a standard body", 0);
  c_make->add_option("shape", shape, "ball | square | polygon | ellipse | segment | petals | cross | slab | polytope")
      ->required()
      ->check(CLI::IsMember({"ball", "square", "polygon", "ellipse", "segment", "petals", "cross", "slab", "polytope"}));
  c_make->add_option("--radius", radius, "ball radius / polygon circumradius")->check(CLI::PositiveNumber);
  c_make->add_option("--half", half, "square half-width / slab half-length")->check(CLI::PositiveNumber);
  c_make->add_option("--sides", sides, "polygon sides")->check(CLI::Range(3, 100000));
  c_make->add_option("--a", ea, "ellipse semi-axis along x")->check(CLI::PositiveNumber);
  c_make->add_option("--b", eb, "ellipse semi-axis along y")->check(CLI::PositiveNumber);
  c_make->add_option("--thickness", thickness, "slab half-thickness")->check(CLI::PositiveNumber);
  c_make->add_option("--points", points, "points as x,y;x,y;...");
  c_make->add_option("--dim", dim, "dimension (cross)");
  c_make->add_flag("--out-cone", out_cone, "polytope: mark as out-cone");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto in = [&](std::size_t i) { return parse_body(inputs.at(i)); };

    if (c_flower->parsed()) {
      const auto b = in(0);
      const auto f = flower_of_file(b);
      auto meta = g.echo("flower");
      emit_body(file_of(f.body(), meta));
    } else if (c_core->parsed()) {
      const auto b = in(0);
      emit_body(file_of(core_of(flower_of_file(b)), g.echo("core")));
    } else if (c_cof->parsed()) {
      auto b = in(0);
      require_representation(b, Representation::Radial, "cof");
      // The stored values are kept; only their reading flips, so cof is an
      // exact involution on files.
      b.reciprocal = !b.reciprocal;
      emit_body(std::move(b));
    } else if (c_polar->parsed()) {
      emit_body(file_of(polar(convex_of_file(in(0))), g.echo("polar")));
    } else if (c_alex->parsed()) {
      const auto b = in(0);
      require_representation(b, Representation::Support, "alexandrov");
      emit_body(file_of(alexandrov(b.values, grid_of(b)), g.echo("alexandrov")));
    } else if (c_power->parsed()) {
      const auto r = power(convex_of_file(in(0)), lambda, g.tol);
      auto meta = g.echo("power");
      meta["lambda"] = lambda;
      meta["m_final"] = r.m_final;
      meta["last_increment"] = r.last_increment;
      emit_body(file_of(r.body, meta));
    } else if (c_fmap->parsed()) {
      const double l = lambda, t = scale;
      const auto out = apply_radial_map(convex_of_file(in(0)), RadialMap([l, t](const Eigen::Ref<const Vector>&, double r) {
                                          return r == 0.0 ? 0.0 : t * std::pow(r, l);
                                        }));
      auto meta = g.echo("fmap");
      meta["lambda"] = lambda;
      meta["scale"] = scale;
      emit_body(file_of(out, meta));
    } else if (c_compose->parsed()) {
      emit_body(file_of(compose(convex_of_file(in(0)), convex_of_file(in(1))), g.echo("compose")));
    } else if (c_rcompose->parsed()) {
      emit_body(file_of(radial_compose(convex_of_file(in(0)), convex_of_file(in(1))), g.echo("rcompose")));
    } else if (c_logmean->parsed()) {
      auto meta = g.echo("logmean");
      meta["lambda"] = lambda;
      emit_body(file_of(log_mean_0(convex_of_file(in(0)), convex_of_file(in(1)), lambda), meta));
    } else if (c_mixed->parsed()) {
      std::vector<ConvexBody> ks;
      for (std::size_t i = 0; i < inputs.size(); ++i) ks.push_back(convex_of_file(in(i)));
      Json j;
      if (coefficients.empty()) {
        std::vector<const ConvexBody*> ptrs;
        for (const auto& k : ks) ptrs.push_back(&k);
        j["mixed_volume"] = flower_mixed_volume(ptrs);
      } else {
        FlowerCombination c{ks, {}};
        std::stringstream ss(coefficients);
        std::string item;
        while (std::getline(ss, item, ',')) c.coefficients.push_back(std::stod(item));
        const auto rep = expansion_check(c);
        j["volume"] = rep.volume;
        j["polynomial"] = rep.polynomial;
        j["discrepancy"] = rep.discrepancy;
        std::string csv = "indices,multinomial,mixed_volume\n";
        for (const auto& t : rep.terms) {
          std::string idx;
          for (int i : t.indices) idx += (idx.empty() ? "" : " ") + std::to_string(i);
          csv += idx + "," + csv_number(t.multinomial) + "," + csv_number(t.mixed_volume) + "\n";
        }
        emit_report(csv);
      }
      emit_json(j);
    } else if (c_volume->parsed()) {
      emit_json(Json{{"volume", volume(star_of_file(in(0)))}});
    } else if (c_invert->parsed()) {
      InversionOptions opt;
      opt.samples = samples;
      opt.seed = g.seed();
      const auto v = is_inversion_convex(polytope_of(in(0)), opt);
      Json j;
      j["convex"] = v.convex;
      j["criterion_convex"] = v.criterion_convex;
      j["direct_convex"] = v.direct_convex;
      j["max_hull_depth"] = v.max_depth;
      j["pairs_tested"] = v.pairs_tested;
      j["sections_tested"] = v.sections_tested;
      if (v.witness) {
        Json w;
        w["x"] = detail::write_point(v.witness->x);
        w["y"] = detail::write_point(v.witness->y);
        w["t"] = v.witness->t;
        w["arc_point"] = detail::write_point(v.witness->z);
        j["witness"] = std::move(w);
      } else {
        j["witness"] = nullptr;
      }
      emit_json(j);
    } else if (c_stab->parsed()) {
      const auto s = stability_check(flower_of_file(in(0)));
      emit_json(Json{{"epsilon", s.epsilon},
                     {"flower_distance", s.flower_distance},
                     {"hull_distance", s.hull_distance},
                     {"bound", s.bound},
                     {"asserted", s.asserted},
                     {"holds", s.holds}});
    } else if (c_dvor->parsed()) {
      const auto b = in(0);
      require_representation(b, Representation::Petals, "dvoretzky");
      const auto r = dvoretzky_search(flower_of_file(b), k_dim, trials, g.seed(), subgrid);
      const auto p = r.projection_distances();
      const auto s = r.section_distances();
      emit_json(Json{{"k", k_dim},
                     {"trials", trials},
                     {"best_projection_distance", r.best_distance},
                     {"median_projection_distance", quantile(p, 0.5)},
                     {"median_section_distance", quantile(s, 0.5)},
                     {"q10_projection_distance", quantile(p, 0.1)},
                     {"q90_projection_distance", quantile(p, 0.9)}});
      std::string csv = "trial,seed,k,projection_distance,section_distance\n";
      for (const auto& t : r.trials)
        csv += std::to_string(t.trial) + "," + std::to_string(t.seed) + "," + std::to_string(k_dim) + "," +
               csv_number(t.projection_distance) + "," + csv_number(t.section_distance) + "\n";
      emit_report(csv);
    } else if (c_gavg->parsed()) {
      const double ratio = global_average(flower_of_file(in(0)), n_rot, g.seed());
      emit_json(Json{{"n_rot", n_rot}, {"seed", g.seed()}, {"ratio", ratio}});
    } else if (c_kashin->parsed()) {
      const double ratio = kashin_petals(dim, g.seed(), petal_count, g.grid);
      Json j{{"dim", dim}, {"petals", petal_count == 0 ? 2 * dim : petal_count}, {"seed", g.seed()}};
      if (std::isfinite(ratio)) j["ratio"] = ratio;
      else j["ratio"] = "inf";
      emit_json(j);
    } else if (c_bm->parsed()) {
      const auto m = mode == "flower" ? CompositionMode::Flower : CompositionMode::Radial;
      const auto r = check_composition_bm(convex_of_file(in(0)), convex_of_file(in(1)), convex_of_file(in(2)), m);
      emit_json(Json{{"mode", mode}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"margin", r.margin}});
      auto id = [&](std::size_t i) { return std::filesystem::path(inputs[i]).filename().string(); };
      emit_report("T,K1,K2,mode,margin\n" + id(0) + "," + id(1) + "," + id(2) + "," + mode + "," + csv_number(r.margin) +
                  "\n");
    } else if (c_plot->parsed()) {
      std::vector<PlotItem> items;
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto b = in(i);
        items.push_back({star_of_file(b), label_of(b, inputs[i])});
      }
      write_text(g.out, plot_svg(items));
    } else if (c_make->parsed()) {
      Json meta = g.echo("make");
      meta["shape"] = shape;
      meta["label"] = shape;
      const auto grid2 = uniform_angle_grid(g.grid);
      if (shape == "ball") {
        meta["radius"] = radius;
        emit_body(file_of(ball(grid2, radius), meta));
      } else if (shape == "square") {
        meta["half"] = half;
        emit_body(file_of(body_of_points(grid2, cube_vertices(2, half)), meta));
      } else if (shape == "polygon") {
        meta["sides"] = sides;
        meta["radius"] = radius;
        emit_body(file_of(body_of_points(grid2, regular_polygon_vertices(sides, radius)), meta));
      } else if (shape == "ellipse") {
        meta["a"] = ea;
        meta["b"] = eb;
        std::vector<double> h(grid2->size());
        for (std::size_t i = 0; i < h.size(); ++i) {
          const auto d = grid2->direction(i);
          h[i] = std::hypot(ea * d[0], eb * d[1]);
        }
        emit_body(file_of(ConvexBody::from_support(grid2, std::move(h)), meta));
      } else if (shape == "segment") {
        const auto pts = parse_points(points.empty() ? "1,0" : points);
        emit_body(file_of(body_of_points(grid2, pts), meta));
      } else if (shape == "petals") {
        emit_body(file_of_points(Representation::Petals, parse_points(points.empty() ? "1,0" : points), std::nullopt, meta));
      } else if (shape == "cross") {
        meta["dim"] = dim;
        emit_body(file_of_points(Representation::Petals, cross_polytope_vertices(dim), std::nullopt, meta));
      } else if (shape == "slab") {
        meta["half"] = half;
        meta["thickness"] = thickness;
        std::vector<Vector> v;
        for (double sx : {-1.0, 1.0})
          for (double sy : {-1.0, 1.0}) v.push_back((Vector(2) << sx * half, 1.0 + sy * thickness).finished());
        emit_body(file_of_points(Representation::Polytope, v, std::nullopt, meta));
      } else {
        auto b = file_of_points(Representation::Polytope, parse_points(points), std::nullopt, meta);
        b.out_cone = out_cone;
        (void)polytope_of(b);  // validate: 0 strictly outside
        emit_body(std::move(b));
      }
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
