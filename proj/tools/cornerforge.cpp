// cornerforge: constructions, counting and verification from the command line.
//
// Exit status: 0 success, 1 malformed input or usage error, 2 verification
// failure (the report carries a witness).

#include "cornerforge/avoiders.hpp"
#include "cornerforge/behrend.hpp"
#include "cornerforge/contfrac.hpp"
#include "cornerforge/diamond.hpp"
#include "cornerforge/hypergraph.hpp"
#include "cornerforge/mandache.hpp"
#include "cornerforge/parallel.hpp"
#include "cornerforge/patterns.hpp"
#include "cornerforge/serialize.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace cornerforge;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string format = "json";
  std::string output;
  std::string params;
};

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("CORNERFORGE_SEED")) {
    try {
      std::size_t pos = 0;
      auto v = std::stoull(env, &pos);
      if (pos == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw InputError(std::string("CORNERFORGE_SEED is not an unsigned integer: '") + env + "'");
  }
  return 0;
}

// Reads a file with a parser, prefixing diagnostics with the path.
template <class F>
auto read_file(const std::string& path, F&& parse) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  try {
    return parse(in);
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot write");
  out << body;
}

// Writes the params record next to the artifact (or to --params).
void write_params(const Options& o, const Json& j) {
  std::string path = o.params;
  if (path.empty()) path = (o.output.empty() || o.output == "-") ? std::string() : o.output + ".json";
  if (path.empty()) {
    std::cerr << j.dump(2) << '\n';
    return;
  }
  write_text(path, j.dump(2) + "\n");
}

std::string grid_text(const GridSet& A) {
  std::ostringstream os;
  write_grid_set(os, A);
  return os.str();
}

/// Lambda subset of [0, L) as a 1-dimensional set with j stored at j + 1.
GridSet lambda_as_set(const std::vector<std::int64_t>& elems, std::int64_t L) {
  GridSet A(1, std::max<std::int64_t>(L, 1));
  for (auto v : elems) A.insert({v + 1});
  return A;
}

std::vector<std::int64_t> set_as_integers(const GridSet& A) {
  if (A.dim() != 1) throw InputError("expected a 1-dimensional set");
  std::vector<std::int64_t> out;
  A.for_each([&](const Point& p) { out.push_back(p[0]); });
  return out;
}

FiniteGroup parse_group(const std::string& text) {
  std::istringstream in(text);
  std::string kind;
  in >> kind;
  try {
    if (kind == "zN") {
      std::int64_t n = 0;
      if (in >> n) return FiniteGroup::cyclic(n);
    } else if (kind == "fp") {
      std::int64_t p = 0;
      int n = 0;
      if (in >> p >> n) return FiniteGroup::elementary(p, n);
    }
  } catch (const std::exception& e) {
    throw InputError("group '" + text + "': " + e.what());
  }
  throw InputError("group '" + text + "': expected 'zN <N>' or 'fp <p> <n>'");
}

std::vector<std::int64_t> parse_list(const std::string& text, const char* what) {
  try {
    return parse_int_list(text);
  } catch (const std::exception& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

Pattern parse_pattern(const std::string& text) {
  try {
    return Pattern::parse(text);
  } catch (const std::exception& e) {
    throw InputError("pattern '" + text + "': " + e.what());
  }
}

Hypergraph parse_motif(const std::string& spec) {
  if (spec == "triforce") return Hypergraph::triforce();
  if (spec.rfind("kforce", 0) == 0) return Hypergraph::kforce(std::stoi(spec.substr(6)));
  if (spec.rfind("edge", 0) == 0) return Hypergraph::single_edge(std::stoi(spec.substr(4)));
  return read_file(spec, read_hypergraph);
}

std::string witness_string(const std::vector<std::int64_t>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s;
}

int emit(const Options& o, const Json& report, const std::string& csv) {
  write_text(o.output, o.format == "csv" ? csv : report.dump(2) + "\n");
  return 0;
}

// --- construct -------------------------------------------------------------

int construct_sphere(const Options& o, const std::string& kind, std::int64_t L) {
  SphereSet S = kind == "behrend" ? behrend_3ap_free(L) : behrend_sum_free(L);
  write_text(o.output, grid_text(lambda_as_set(S.elements, L)));
  write_params(o, Json{{"construct", kind}, {"L", L}, {"size", S.elements.size()}, {"sphere", to_json(S.params)}});
  return 0;
}

int construct_qcfree(const Options& o, const std::vector<std::int64_t>& a, std::int64_t L) {
  auto Q = behrend_qc_free(a, L);
  write_text(o.output, grid_text(lambda_as_set(Q.sphere.elements, L)));
  write_params(o, Json{{"construct", "qcfree"},
                       {"L", L},
                       {"size", Q.sphere.elements.size()},
                       {"qc_system", to_json(Q.system)},
                       {"sphere", to_json(Q.sphere.params)}});
  return 0;
}

int construct_alpha(const Options& o, unsigned m, const std::string& r) {
  auto seq = build_alpha_hard(m, parse_rational(r));
  write_text(o.output, to_json(seq).dump(2) + "\n");
  return 0;
}

Json avoider_summary(const AvoiderParams& P, const DensityEstimate& dens, const Rational& measure) {
  Json j = to_json(P);
  j["density"] = to_json(dens);
  j["target_measure"] = to_string(measure);
  j["target_2delta"] = 2 * P.delta;
  j["measure_at_least_2delta"] = measure.convert_to<double>() >= 2 * P.delta;
  double shortfall = measure.convert_to<double>() - dens.value;
  j["density_shortfall"] = shortfall;
  return j;
}

AvoiderConfig config_from(double delta, double c, std::optional<std::int64_t> L, const std::string& lambda,
                          std::int64_t target) {
  AvoiderConfig cfg;
  cfg.delta = delta;
  cfg.c = c;
  cfg.L = L;
  if (!lambda.empty()) cfg.lambda = parse_list(lambda, "--lambda");
  cfg.target_N = target;
  return cfg;
}

DensityEstimate corner_density(const CornerAvoider& av, std::uint64_t samples, std::uint64_t seed) {
  if (av.N() <= 16384) return av.exact_density();
  return av.sampled_density(samples, seed);
}

int construct_corner(const Options& o, const AvoiderConfig& cfg, std::uint64_t samples) {
  auto av = build_corner_avoider(cfg);
  const std::uint64_t seed = resolve_seed(o);
  auto dens = corner_density(av, samples, seed);
  Json j = avoider_summary(av.params(), dens, av.system().measure());
  j["construct"] = "corner3d";
  j["seed"] = seed;
  j["materialized"] = av.N() <= cfg.materialize_limit;
  if (av.N() <= cfg.materialize_limit) write_text(o.output, grid_text(av.materialize()));
  write_params(o, j);
  return 0;
}

int construct_fivepoint(const Options& o, const std::vector<std::int64_t>& a, const AvoiderConfig& cfg) {
  auto av = build_five_point_avoider(a, cfg);
  auto A = av.materialize();
  DensityEstimate dens;
  dens.is_exact = true;
  dens.exact = Rational(BigInt(A.size()), BigInt(av.N()));
  dens.value = dens.exact.convert_to<double>();
  Json j = avoider_summary(av.params(), dens, av.system().measure());
  j["construct"] = "fivepoint";
  write_text(o.output, grid_text(A));
  write_params(o, j);
  return 0;
}

int construct_lift(const Options& o, const std::string& pattern, const std::string& base_path) {
  auto T = parse_pattern(pattern);
  auto base = read_file(base_path, read_grid_set);
  auto res = lift_avoider(T, base);
  write_text(o.output, grid_text(res.set));
  Json j{{"construct", "lift"}, {"pattern", pattern}, {"route", res.route}, {"side", res.set.side()}, {"size", res.set.size()}};
  if (res.route == "phi") j["C"] = res.C;
  else {
    j["columns"] = res.columns;
    j["offset"] = res.offset;
  }
  write_params(o, j);
  return 0;
}

int construct_mandache(const Options& o, const std::string& kernel_path, const std::string& group) {
  auto W = read_file(kernel_path, read_kernel);
  auto G = parse_group(group);
  const std::uint64_t seed = resolve_seed(o);
  auto A = sample_mandache(W, G, seed);
  std::ostringstream os;
  write_group_set(os, A);
  write_text(o.output, os.str());
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(kernel_hash(W)));
  write_params(o, Json{{"construct", "mandache"}, {"group", G.descriptor()}, {"seed", seed}, {"kernel_hash", hash}, {"size", A.size()}});
  return 0;
}

// --- count -----------------------------------------------------------------

int count_spectrum(const Options& o, const std::string& pattern, const std::string& set_path) {
  std::ifstream probe(set_path);
  if (!probe) throw InputError(set_path + ": cannot open");
  std::string first;
  probe >> first;
  Json entries = Json::array();
  std::ostringstream csv;
  if (first == "group") {
    auto A = read_file(set_path, read_group_set);
    if (pattern != "corner2") throw InputError("group sets support only the pattern corner2");
    auto s = spectrum(A);
    csv << "d,count\n";
    for (auto [d, c] : s.entries) {
      csv << '"' << A.group().format(d) << "\"," << c << '\n';
      entries.push_back(Json{{"d", A.group().format(d)}, {"count", c}});
    }
  } else {
    auto A = read_file(set_path, read_grid_set);
    auto T = parse_pattern(pattern);
    if (T.dim() != A.dim()) throw InputError("pattern dimension " + std::to_string(T.dim()) + " does not match set dimension " + std::to_string(A.dim()));
    auto s = spectrum(A, T);
    write_spectrum_csv(csv, s, [](std::int64_t d) { return d; });
    for (auto [d, c] : s.entries) entries.push_back(Json{{"d", d}, {"count", c}});
  }
  return emit(o, Json{{"pattern", pattern}, {"spectrum", entries}}, csv.str());
}

int count_density(const Options& o, const std::string& path) {
  auto H = read_file(path, read_hypergraph);
  Json j{{"k", H.uniformity()}, {"n", H.vertices()}, {"edges", H.edge_count()}, {"edge_density", to_string(edge_density(H))}};
  std::ostringstream csv;
  csv << "quantity,value\nedge_density," << to_string(edge_density(H)) << '\n';
  if (H.uniformity() >= 3) {
    auto kd = kforce_density(H);
    j["kforce_density"] = to_string(kd);
    csv << "kforce_density," << to_string(kd) << '\n';
  }
  return emit(o, j, csv.str());
}

int count_homs(const Options& o, const std::string& motif, const std::string& host) {
  auto F = parse_motif(motif);
  auto H = read_file(host, read_hypergraph);
  auto homs = hom_count(F, H);
  Rational dens(BigInt(homs), boost::multiprecision::pow(BigInt(H.vertices()), static_cast<unsigned>(F.vertices())));
  std::ostringstream csv;
  csv << "homs,density\n" << homs << ',' << to_string(dens) << '\n';
  return emit(o, Json{{"motif", motif}, {"homs", homs}, {"density", to_string(dens)}}, csv.str());
}

int count_triforce(const Options& o, const std::string& path) {
  auto W = read_file(path, read_kernel);
  auto t = triforce_weighted(W);
  std::ostringstream csv;
  csv << "triforce,value\n" << to_string(t) << ',' << t.convert_to<double>() << '\n';
  return emit(o, Json{{"g", W.resolution()}, {"mean", to_string(W.mean())}, {"triforce", to_string(t)}, {"value", t.convert_to<double>()}},
              csv.str());
}

// --- verify ----------------------------------------------------------------

int verify_diamondfree(const Options& o, const std::string& path) {
  auto G = read_file(path, read_tripartite);
  auto bad = verify_diamond_free(G);
  Json j{{"diamond_free", !bad}};
  std::ostringstream csv;
  csv << "diamond_free,part,u,v,triangles\n";
  if (bad) {
    j["witness"] = Json{{"part", part_name(bad->part)}, {"u", bad->u}, {"v", bad->v}, {"triangles", bad->triangles}};
    csv << "false," << part_name(bad->part) << ',' << bad->u << ',' << bad->v << ',' << bad->triangles << '\n';
  } else {
    csv << "true,,,,\n";
  }
  emit(o, j, csv.str());
  return bad ? 2 : 0;
}

int verify_relationfree(const Options& o, const std::string& relation, const std::string& path) {
  auto coeffs = parse_list(relation, "--relation");
  auto A = read_file(path, read_grid_set);
  auto w = verify_relation_free(set_as_integers(A), coeffs);
  Json j{{"relation", coeffs}, {"relation_free", !w}};
  std::ostringstream csv;
  csv << "relation_free,witness\n" << (w ? "false" : "true") << ",\"" << (w ? witness_string(*w) : "") << "\"\n";
  if (w) j["witness"] = *w;
  emit(o, j, csv.str());
  return w ? 2 : 0;
}

int verify_qcfree(const Options& o, const std::vector<std::int64_t>& a, const std::string& path) {
  auto A = read_file(path, read_grid_set);
  auto sys = qc_coefficients(a);
  auto w = find_qc(sys, set_as_integers(A));
  Json j{{"qc_system", to_json(sys)}, {"qc_free", !w}};
  std::ostringstream csv;
  csv << "qc_free,witness\n" << (w ? "false" : "true") << ",\"" << (w ? witness_string(*w) : "") << "\"\n";
  if (w) j["witness"] = *w;
  emit(o, j, csv.str());
  return w ? 2 : 0;
}

int verify_alpha_cmd(const Options& o, const std::string& path, std::size_t from, std::size_t count) {
  AlphaSequence seq = [&] {
    try {
      return alpha_from_json(read_json(path));
    } catch (const InputError&) {
      throw;
    } catch (const std::exception& e) {
      throw InputError(path + ": " + e.what());
    }
  }();
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "i,p,q,coprime,smooth,approximation,window\n";
  bool failed = false;
  for (std::size_t i = from; i < from + count; ++i) {
    if (!seq.has_index(i)) continue;
    auto r = verify_alpha(seq, i);
    for (auto c : {r.coprime, r.smooth, r.approximation, r.window}) failed = failed || c == Check::fail;
    rows.push_back(to_json(r));
    csv << i << ',' << r.p << ',' << r.q << ',' << to_string(r.coprime) << ',' << to_string(r.smooth) << ','
        << to_string(r.approximation) << ',' << to_string(r.window) << '\n';
  }
  emit(o, Json{{"K", seq.K()}, {"reports", rows}, {"pass", !failed}}, csv.str());
  return failed ? 2 : 0;
}

int verify_avoidance(const Options& o, const std::string& params_path, const std::string& set_path) {
  Json pj = read_json(params_path);
  AvoiderConfig cfg;
  try {
    cfg = avoider_config_from_json(pj);
  } catch (const std::exception& e) {
    throw InputError(params_path + ": " + e.what());
  }
  const std::string form = pj.value("form", std::string("corner3d"));
  std::ostringstream csv;
  csv << "d,count,bound,pass\n";
  Json rows = Json::array();
  bool ok = true;
  if (form == "corner3d") {
    auto av = build_corner_avoider(cfg);
    if (av.N() != cfg.target_N) throw InputError(params_path + ": rebuilt N differs from the record");
    GridSet A = set_path.empty() ? av.materialize() : read_file(set_path, read_grid_set);
    auto rep = verify_corner_avoidance(av, A);
    const double bound = rep.bound.convert_to<double>();
    for (const auto& r : rep.rows) {
      bool pass = r.transfer_ok && r.downstream_ok && Rational(r.count) <= rep.bound;
      ok = ok && pass;
      csv << r.d << ',' << r.count << ',' << bound << ',' << (pass ? "true" : "false") << '\n';
      Json row{{"d", r.d}, {"count", r.count}, {"pass", pass}};
      if (r.witness) row["witness"] = *r.witness;
      rows.push_back(row);
    }
    if (o.format != "csv")
      write_text(o.output, Json{{"form", form}, {"bound", to_string(rep.bound)}, {"max_count", rep.max_count},
                                {"corners", rep.corners}, {"pass", ok}, {"rows", rows}}
                               .dump(2) + "\n");
    else
      write_text(o.output, csv.str());
  } else if (form == "fivepoint") {
    auto av = build_five_point_avoider(pj.at("a").get<std::vector<std::int64_t>>(), cfg);
    GridSet A = set_path.empty() ? av.materialize() : read_file(set_path, read_grid_set);
    auto rep = verify_five_point_avoidance(av, A);
    for (const auto& r : rep.rows) {
      ok = ok && r.transfer_ok;
      csv << r.d << ',' << r.count << ",," << (r.transfer_ok ? "true" : "false") << '\n';
      Json row{{"d", r.d}, {"count", r.count}, {"pass", r.transfer_ok}};
      if (r.witness) row["witness"] = *r.witness;
      rows.push_back(row);
    }
    if (o.format != "csv")
      write_text(o.output, Json{{"form", form}, {"max_count", rep.max_count}, {"tuples", rep.tuples}, {"pass", ok}, {"rows", rows}}
                               .dump(2) + "\n");
    else
      write_text(o.output, csv.str());
  } else {
    throw InputError(params_path + ": unknown avoider form '" + form + "'");
  }
  return ok ? 0 : 2;
}

// --- report ----------------------------------------------------------------

int report_cmd(const Options& o, const std::string& params_path, std::uint64_t samples) {
  Json pj = read_json(params_path);
  AvoiderConfig cfg;
  try {
    cfg = avoider_config_from_json(pj);
  } catch (const std::exception& e) {
    throw InputError(params_path + ": " + e.what());
  }
  if (pj.value("form", std::string("corner3d")) != "corner3d") throw InputError("report covers corner avoiders");
  auto av = build_corner_avoider(cfg);
  const auto seed = resolve_seed(o);
  auto dens = corner_density(av, samples, seed);
  Json j = avoider_summary(av.params(), dens, av.system().measure());
  const double N3 = std::pow(static_cast<double>(av.N()), 3);
  const double lg = std::log(1 / cfg.delta);
  // delta^(c ln(1/delta)) N^3, with and without the factor 14; c as in L.
  j["bound_14_delta_power"] = 14.0 * std::exp(-cfg.c * lg * lg) * N3;
  j["bound_delta_power"] = std::pow(cfg.delta, cfg.c * lg) * N3;
  j["bound_14N3_over_L"] = 14.0 * N3 / static_cast<double>(av.params().L);
  if (av.N() <= cfg.materialize_limit) {
    auto rep = verify_corner_avoidance(av, av.materialize());
    j["max_corner_count"] = rep.max_count;
    j["corners"] = rep.corners;
    j["transfer_checks_pass"] = rep.transfer_ok();
  }
  std::ostringstream csv;
  csv << "key,value\n";
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!it->is_structured()) csv << it.key() << ',' << it->dump() << '\n';
  return emit(o, j, csv.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constructions and verifiers for sets avoiding popular corners and patterns"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Random seed (falls back to CORNERFORGE_SEED)");
  app.add_option("--threads", o.threads, "Worker cap (0 = all cores)");
  app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));

  auto add_out = [&](CLI::App* c, bool params) {
    c->add_option("-o,--output", o.output, "Output path ('-' for stdout)");
    if (params) c->add_option("--params", o.params, "Params JSON path (default <output>.json)");
  };

  // construct
  auto* construct = app.add_subcommand("construct", "Build a set or sequence")->require_subcommand(1);
  std::int64_t L = 0;
  std::string a_text = "0,1,2,3,4", r_text = "2", lambda_text, pattern_text, base_path, kernel_path, group_text = "fp 3 4";
  unsigned m = 16;
  double delta = 0.1, c = 0.05;
  std::optional<std::int64_t> L_opt;
  std::int64_t target = 200;
  std::uint64_t samples = 200000;

  for (const char* name : {"behrend", "sumfree"}) {
    auto* s = construct->add_subcommand(name, name == std::string("behrend") ? "Behrend-type 3-AP-free subset of [0, L)"
                                                                             : "Subset of [0, L) free of x+y+z=3w");
    s->add_option("--L", L, "Range")->required()->check(CLI::PositiveNumber);
    add_out(s, true);
  }
  auto* c_qc = construct->add_subcommand("qcfree", "Subset of [0, L) free of QC(a)");
  c_qc->add_option("--a", a_text, "Coordinates a_1,...,a_k");
  c_qc->add_option("--L", L, "Range")->required()->check(CLI::PositiveNumber);
  add_out(c_qc, true);
  auto* c_alpha = construct->add_subcommand("alpha", "Continued fraction with smooth-free denominators");
  c_alpha->add_option("--m", m, "Smoothness bound")->check(CLI::Range(2u, 1000u));
  c_alpha->add_option("--r", r_text, "Scale r (rational p/q)");
  add_out(c_alpha, false);
  auto add_avoider = [&](CLI::App* s) {
    s->add_option("--delta", delta, "Target density");
    s->add_option("--c", c, "Constant c in L = exp(c ln(1/delta)^2)");
    s->add_option("--L", L_opt, "Override L");
    s->add_option("--lambda", lambda_text, "Override Lambda (comma list)");
    s->add_option("--target-N", target, "Requested side length")->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 30));
    add_out(s, true);
  };
  auto* c_corner = construct->add_subcommand("corner3d", "Subset of [N]^3 with no popular 3D corner");
  add_avoider(c_corner);
  c_corner->add_option("--samples", samples, "Samples for the density estimate when N is large");
  auto* c_five = construct->add_subcommand("fivepoint", "Subset of [N] with no popular 5-point pattern");
  add_avoider(c_five);
  c_five->add_option("--a", a_text, "Five distinct coordinates");
  auto* c_lift = construct->add_subcommand("lift", "Lift a base avoider to a pattern");
  c_lift->add_option("--pattern", pattern_text, "Pattern")->required();
  c_lift->add_option("--base", base_path, "Base set")->required();
  add_out(c_lift, true);
  auto* c_man = construct->add_subcommand("mandache", "Random subset of G x G from a step kernel");
  c_man->add_option("--kernel", kernel_path, "Kernel file")->required();
  c_man->add_option("--group", group_text, "'zN <N>' or 'fp <p> <n>'");
  add_out(c_man, true);

  // count
  auto* count = app.add_subcommand("count", "Counting")->require_subcommand(1);
  std::string set_path, motif = "triforce", host_path, file_path;
  auto* k_spec = count->add_subcommand("spectrum", "Pattern count for every nonzero d");
  k_spec->add_option("--pattern", pattern_text, "Pattern")->required();
  k_spec->add_option("--set", set_path, "Set file")->required();
  add_out(k_spec, false);
  auto* k_dens = count->add_subcommand("density", "Edge and k-force densities of a hypergraph");
  k_dens->add_option("hypergraph", file_path)->required();
  add_out(k_dens, false);
  auto* k_homs = count->add_subcommand("homs", "Homomorphism count");
  k_homs->add_option("--motif", motif, "triforce, kforce<k>, edge<k> or a file");
  k_homs->add_option("host", host_path)->required();
  add_out(k_homs, false);
  auto* k_tri = count->add_subcommand("triforce", "Triforce density of a step kernel");
  k_tri->add_option("kernel", file_path)->required();
  add_out(k_tri, false);

  // verify
  auto* verify = app.add_subcommand("verify", "Verification (exit 2 on failure)")->require_subcommand(1);
  std::string relation = "1,1,1,-3";
  std::size_t from = 0, howmany = 5;
  auto* v_dia = verify->add_subcommand("diamondfree", "Every edge in exactly one triangle");
  v_dia->add_option("graph", file_path)->required();
  add_out(v_dia, false);
  auto* v_rel = verify->add_subcommand("relationfree", "No nontrivial solution of a linear relation");
  v_rel->add_option("--relation", relation, "Coefficients");
  v_rel->add_option("set", file_path)->required();
  add_out(v_rel, false);
  auto* v_qc = verify->add_subcommand("qcfree", "No QC(a) inside the set");
  v_qc->add_option("--a", a_text, "Coordinates");
  v_qc->add_option("set", file_path)->required();
  add_out(v_qc, false);
  auto* v_alpha = verify->add_subcommand("alpha", "Approximation properties of (p_i, q_i)");
  v_alpha->add_option("alpha", file_path)->required();
  v_alpha->add_option("--from", from, "First index");
  v_alpha->add_option("--count", howmany, "Number of indices");
  add_out(v_alpha, false);
  auto* v_avoid = verify->add_subcommand("avoidance", "Brute-force pattern counts with transfer checks");
  v_avoid->add_option("params", file_path, "Avoider params JSON")->required();
  v_avoid->add_option("--set", set_path, "Set file (default: rebuild)");
  add_out(v_avoid, false);

  auto* report = app.add_subcommand("report", "Density, bounds and counts for a corner avoider");
  report->add_option("params", file_path, "Avoider params JSON")->required();
  report->add_option("--samples", samples, "Samples for the density estimate when N is large");
  add_out(report, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (seed_opt->count()) o.seed = seed_value;
  thread_cap().store(o.threads);
  try {
    auto* top = app.get_subcommands().front();
    auto* sub = top->get_subcommands().empty() ? nullptr : top->get_subcommands().front();
    const std::string t = top->get_name(), s = sub ? sub->get_name() : "";
    if (t == "construct") {
      if (s == "behrend" || s == "sumfree") return construct_sphere(o, s, L);
      if (s == "qcfree") return construct_qcfree(o, parse_list(a_text, "--a"), L);
      if (s == "alpha") return construct_alpha(o, m, r_text);
      if (s == "corner3d") return construct_corner(o, config_from(delta, c, L_opt, lambda_text, target), samples);
      if (s == "fivepoint") return construct_fivepoint(o, parse_list(a_text, "--a"), config_from(delta, c, L_opt, lambda_text, target));
      if (s == "lift") return construct_lift(o, pattern_text, base_path);
      if (s == "mandache") return construct_mandache(o, kernel_path, group_text);
    } else if (t == "count") {
      if (s == "spectrum") return count_spectrum(o, pattern_text, set_path);
      if (s == "density") return count_density(o, file_path);
      if (s == "homs") return count_homs(o, motif, host_path);
      if (s == "triforce") return count_triforce(o, file_path);
    } else if (t == "verify") {
      if (s == "diamondfree") return verify_diamondfree(o, file_path);
      if (s == "relationfree") return verify_relationfree(o, relation, file_path);
      if (s == "qcfree") return verify_qcfree(o, parse_list(a_text, "--a"), file_path);
      if (s == "alpha") return verify_alpha_cmd(o, file_path, from, howmany);
      if (s == "avoidance") return verify_avoidance(o, file_path, set_path);
    } else if (t == "report") {
      return report_cmd(o, file_path, samples);
    }
    std::cerr << "cornerforge: unknown command\n";
    return 1;
  } catch (const InputError& e) {
    std::cerr << "cornerforge: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "cornerforge: " << e.what() << '\n';
    return 1;
  }
}
