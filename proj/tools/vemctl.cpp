// vemctl: dimension tables, serendipity reductions, verification runs and
// kernel dumps for single elements or directories of element files.

#include "vemser/element_io.hpp"
#include "vemser/errors.hpp"
#include "vemser/report.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace vemser;

namespace {

struct Options {
  std::vector<std::string> inputs;
  std::string family, preset, strategy, s_space, json_out, origin;
  std::optional<int> k, kd, kr, beta, beta_d, beta_r, mu_r;
  double theta0 = 0.05, dist_tol = 1e-6, rank_tol = kRankTol;
  unsigned seed = 0;
  int samples = 20;
  int jobs = 0;
};

void add_options(CLI::App *app, Options &o) {
  app->add_option("inputs", o.inputs, "Element JSON files or directories of them")->required();
  app->add_option("--family", o.family, "face2d, edge2d, face3d or edge3d");
  app->add_option("--preset", o.preset, "bdm, rt, n1 or n2; the family follows the element dimension");
  app->add_option("--k", o.k, "Boundary degree k (beta for edge3d)");
  app->add_option("--kd", o.kd, "Divergence degree");
  app->add_option("--kr", o.kr, "Rot degree (face2d, edge2d, face3d)");
  app->add_option("--beta", o.beta, "Edge3D tangential degree");
  app->add_option("--beta-d", o.beta_d, "Edge3D face divergence degree");
  app->add_option("--beta-r", o.beta_r, "Edge3D face rot degree");
  app->add_option("--mu-r", o.mu_r, "Edge3D curl-curl degree");
  app->add_option("--strategy", o.strategy, "convex, lazy, stingy or systematic");
  app->add_option("--s-space", o.s_space, "Preserved space: pk, bdm, rt, n1, n2");
  app->add_option("--theta0", o.theta0, "Angle tolerance of the boundary cover (radians)");
  app->add_option("--dist-tol", o.dist_tol, "Distance tolerance of the boundary cover, relative to h");
  app->add_option("--rank-tol", o.rank_tol, "Relative singular value threshold");
  app->add_option("--seed", o.seed, "Seed of the randomized checks");
  app->add_option("--samples", o.samples, "Random inputs per randomized check");
  app->add_option("--origin", o.origin, "Scaling origin as comma-separated coordinates");
  app->add_option("--json", o.json_out, "Write JSON lines to this file ('-' for stdout instead of tables)");
  app->add_option("--jobs", o.jobs, "Elements processed in parallel (default: hardware threads)");
}

FamilySpec make_spec(const Options &o, int dim) {
  std::optional<Family> fam;
  if (!o.family.empty()) fam = family_from_string(o.family);
  const std::optional<int> k = o.k ? o.k : o.beta;
  if (o.k && o.beta && *o.k != *o.beta) throw ValidationError("--k and --beta disagree");
  if (!k) throw ValidationError("a degree is required (--k or --beta)");

  FamilySpec s;
  if (!o.preset.empty()) {
    const bool face = o.preset == "bdm" || o.preset == "rt";
    if (!face && o.preset != "n1" && o.preset != "n2")
      throw ValidationError("unknown preset '" + o.preset + "' (expected n1, n2, bdm or rt)");
    const Family want = face ? (dim == 2 ? Family::Face2D : Family::Face3D) : (dim == 2 ? Family::Edge2D : Family::Edge3D);
    if (fam && *fam != want)
      throw ValidationError("preset " + o.preset + " does not match family " + o.family + " on a " +
                            std::to_string(dim) + "D element");
    fam = want;
    if (o.preset == "bdm") s = dim == 2 ? FamilySpec::face2d(*k, *k - 1, *k - 1) : FamilySpec::face3d(*k, *k - 1, *k - 1);
    if (o.preset == "rt") s = dim == 2 ? FamilySpec::face2d(*k, *k, *k - 1) : FamilySpec::face3d(*k, *k, *k - 1);
    if (o.preset == "n2") s = dim == 2 ? FamilySpec::edge2d(*k, *k - 1, *k - 1) : FamilySpec::n2like(*k);
    if (o.preset == "n1") s = dim == 2 ? FamilySpec::edge2d(*k, *k - 1, *k) : FamilySpec::n1like(*k);
  } else {
    if (!fam) fam = dim == 2 ? Family::Face2D : Family::Face3D;
    switch (*fam) {
    case Family::Face2D: s = FamilySpec::face2d(*k, *k - 1, *k - 1); break;
    case Family::Edge2D: s = FamilySpec::edge2d(*k, *k - 1, *k - 1); break;
    case Family::Face3D: s = FamilySpec::face3d(*k, *k - 1, *k - 1); break;
    case Family::Edge3D: s = FamilySpec::n2like(*k); break;
    }
  }
  if (s.family == Family::Edge3D) {
    if (o.beta_d) s.beta_d = *o.beta_d;
    if (o.beta_r) s.beta_r = *o.beta_r;
    if (o.kd) s.kd = *o.kd;
    if (o.mu_r) s.mu_r = s.kr = *o.mu_r;
    if (o.kr) throw ValidationError("--kr does not apply to edge3d (use --mu-r)");
  } else {
    if (o.kd) s.kd = *o.kd;
    if (o.kr) s.kr = *o.kr;
    if (o.beta_d || o.beta_r || o.mu_r) throw ValidationError("--beta-d, --beta-r and --mu-r apply to edge3d only");
  }
  if (s.dim() != dim)
    throw ValidationError("family " + to_string(s.family) + " needs a " + std::to_string(s.dim()) + "D element");
  s.validate();
  return s;
}

std::vector<std::string> expand_inputs(const std::vector<std::string> &inputs) {
  std::vector<std::string> out;
  for (const auto &in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<std::string> files;
      for (const auto &entry : fs::directory_iterator(in))
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path().string());
      std::sort(files.begin(), files.end());
      out.insert(out.end(), files.begin(), files.end());
    } else {
      out.push_back(in);
    }
  }
  return out;
}

using Command = Report (*)(const Element &, const std::string &, const RunConfig &);

Report run_one(Command cmd, const std::string &name, const std::string &path, const Options &o) {
  Report r;
  try {
    Element e = load_element(path);
    if (!o.origin.empty()) {
      std::vector<double> x;
      std::stringstream ss(o.origin);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        try {
          x.push_back(std::stod(tok));
        } catch (const std::exception &) {
          throw ValidationError("--origin: '" + tok + "' is not a number");
        }
      }
      e = e.with_origin(Eigen::Map<VectorXd>(x.data(), x.size()));
    }
    RunConfig cfg;
    cfg.spec = make_spec(o, e.dim());
    if (!o.strategy.empty()) cfg.strategy = strategy_from_string(o.strategy);
    if (!o.s_space.empty()) cfg.s_space = space_from_string(o.s_space);
    cfg.opt.rank_tol = o.rank_tol;
    cfg.opt.cover.theta0 = o.theta0;
    cfg.opt.cover.dist_tol = o.dist_tol;
    cfg.seed = o.seed;
    cfg.samples = o.samples;
    const std::string label = fs::path(path).filename().string();
    r = cmd(e, label, cfg);
  } catch (const ValidationError &err) {
    r.status = kExitValidation;
    r.json = {{"command", name}, {"element", path}, {"error", err.what()}, {"status", "validation error"}};
    r.text = "error: " + std::string(err.what()) + "\n";
  } catch (const InvariantError &err) {
    r.status = kExitInvariant;
    r.json = {{"command", name}, {"element", path}, {"error", err.what()}, {"status", "invariant failure"}};
    r.text = "invariant failure: " + std::string(err.what()) + "\n";
  }
  return r;
}

int run(Command cmd, const std::string &name, const Options &o) {
  const std::vector<std::string> files = expand_inputs(o.inputs);
  if (files.empty()) {
    std::cerr << "error: no element files found\n";
    return kExitValidation;
  }
  std::vector<Report> reports(files.size());
  const int jobs = std::max(1, std::min<int>(o.jobs > 0 ? o.jobs : std::thread::hardware_concurrency(),
                                             static_cast<int>(files.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < files.size(); i = next++) reports[i] = run_one(cmd, name, files[i], o);
    });
  for (auto &t : pool) t.join();

  std::ofstream jf;
  const bool json_stdout = o.json_out == "-";
  if (!o.json_out.empty() && !json_stdout) {
    jf.open(o.json_out);
    if (!jf) {
      std::cerr << "error: cannot write " << o.json_out << "\n";
      return kExitValidation;
    }
  }
  int status = kExitOk;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const Report &r = reports[i];
    if (json_stdout)
      std::cout << r.json.dump() << "\n";
    else {
      if (files.size() > 1) std::cout << "== " << files[i] << "\n";
      (r.status == kExitValidation ? std::cerr : std::cout) << r.text;
      if (jf) jf << r.json.dump() << "\n";
    }
    status = std::max(status, r.status);
  }
  return status;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Serendipity reductions of H(div) and H(curl) virtual element spaces"};
  app.require_subcommand(1);
  Options o;
  struct Sub {
    const char *name, *help;
    Command cmd;
  };
  const Sub subs[] = {{"dims", "DOF counts and classical finite element counterparts", cmd_dims},
                      {"reduce", "Serendipity reduction with its invariant checks", cmd_reduce},
                      {"verify", "Seeded randomized verification suite", cmd_verify},
                      {"zspace", "Kernel of the kept DOFs inside the preserved space", cmd_zspace}};
  std::vector<std::pair<CLI::App *, const Sub *>> apps;
  for (const auto &s : subs) {
    CLI::App *sub = app.add_subcommand(s.name, s.help);
    add_options(sub, o);
    apps.push_back({sub, &s});
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : kExitValidation;
  }
  for (const auto &[sub, s] : apps)
    if (sub->parsed()) return run(s->cmd, s->name, o);
  return kExitValidation;
}
