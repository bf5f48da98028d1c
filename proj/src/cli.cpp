#include "freeclark/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>

#include <CLI11.hpp>

#include "freeclark/random.hpp"

namespace freeclark {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Entry {
  std::string name;
  double error;
  double tol;
  int safe_degree = -1;
};

class CheckList {
 public:
  explicit CheckList(const VerifyConfig& cfg) : cfg_(cfg) {}

  // Runs fn, which returns a batch of entries sharing one computation.
  void group(const std::string& fallback, const std::function<std::vector<Entry>()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Entry> entries;
    std::string note;
    try {
      entries = fn();
    } catch (const Error& e) {
      note = e.what();
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (!note.empty()) {
      Check c;
      c.name = fallback;
      c.max_error = kInf;
      c.tolerance = tolerance(fallback, 0.0);
      c.runtime_ms = ms;
      c.note = note;
      checks_.push_back(c);
      return;
    }
    for (const Entry& e : entries) {
      Check c;
      c.name = e.name;
      c.max_error = e.error;
      c.tolerance = tolerance(e.name, e.tol);
      c.safe_degree = e.safe_degree;
      c.pass = std::isfinite(e.error) && e.error <= c.tolerance;
      c.runtime_ms = ms / static_cast<double>(entries.size());
      checks_.push_back(c);
    }
  }

  std::vector<Check> take() {
    std::stable_sort(checks_.begin(), checks_.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
    return std::move(checks_);
  }

 private:
  double tolerance(const std::string& name, double deflt) const {
    if (cfg_.tol) return *cfg_.tol;
    const auto it = cfg_.tolerances.find(name);
    return it == cfg_.tolerances.end() ? deflt : it->second;
  }

  const VerifyConfig& cfg_;
  std::vector<Check> checks_;
};

// Positive part of -min_eig relative to the scale used by psd_check.
double psd_violation(const Mat& G) {
  const PsdReport r = psd_check(G);
  return std::max(0.0, -r.min_eig) / std::max(1.0, r.norm);
}

double series_distance(const FreeSeries& a, const FreeSeries& b) {
  double e = 0.0;
  const int n = std::min(a.size(), b.size());
  for (int i = 0; i < n; ++i) e = std::max(e, max_abs(a[i] - b[i]));
  return e;
}

double series_distance(const CommSeries& a, const CommSeries& b) {
  double e = 0.0;
  const int n = std::min(a.size(), b.size());
  for (int i = 0; i < n; ++i) e = std::max(e, max_abs(a[i] - b[i]));
  return e;
}

double unitarity(const Mat& W) {
  const int r = static_cast<int>(W.rows()), c = static_cast<int>(W.cols());
  return std::max(op_norm(W.adjoint() * W - Mat::Identity(c, c)), op_norm(W * W.adjoint() - Mat::Identity(r, r)));
}

bool wants(const VerifyConfig& cfg, const char* suite) { return cfg.suite == "all" || cfg.suite == suite; }

void free_suites(const FreeSeries& Binst, const std::optional<CommSeries>& lift_of, const VerifyConfig& cfg,
                 CheckList& out) {
  const int N = cfg.N;
  const FreeSeries B = Binst.truncated(N);
  // Coefficients beyond N are kept for the top Gleason block when the instance carries them.
  const FreeSeries Bwide = Binst.N > N ? Binst : B;

  if (wants(cfg, "herglotz")) {
    out.group("herglotz.round_trip", [&] {
      const FreeSeries H = cayley_to_herglotz(B);
      const MomentFunctional phi = moments_from_herglotz(H);
      const Mat im = 0.5 * (H[0] - H[0].adjoint());
      const FreeSeries B2 = cayley_to_schur(herglotz_from_moments(phi, Side::Left, im));
      const FreeSeries HR = transpose_series(H);
      double kerr = 0.0;
      kerr = std::max(kerr, max_abs(herglotz_kernel_from_H(H, Side::Left).G -
                                    herglotz_kernel_from_moments(phi, Side::Left).G));
      kerr = std::max(kerr, max_abs(herglotz_kernel_from_H(HR, Side::Right).G -
                                    herglotz_kernel_from_moments(phi, Side::Right).G));
      return std::vector<Entry>{{"herglotz.round_trip", series_distance(B, B2), 1e-10},
                                {"herglotz.kernel_identity", kerr, 0.0},
                                {"herglotz.kernel_psd", psd_violation(herglotz_kernel_from_moments(phi, Side::Right).G), 1e-9}};
    });
    out.group("kernels.dbr", [&] {
      const FreeSeries BR = transpose_series(B);
      const TruncatedFock fock(B.d, B.m, N);
      const Mat DR = dbr_kernel(BR, Side::Right).G, DL = dbr_kernel(B, Side::Left).G;
      const Mat I = Mat::Identity(fock.dim(), fock.dim());
      const Mat MR = mult_matrix(BR, Side::Right, fock), ML = mult_matrix(B, Side::Left, fock);
      const double eq = std::max(max_abs(DR - (I - MR * MR.adjoint())), max_abs(DL - (I - ML * ML.adjoint())));
      return std::vector<Entry>{{"kernels.dbr_psd", std::max(psd_violation(DR), psd_violation(DL)), 1e-9},
                                {"kernels.dbr_equals_multiplier", eq, 1e-12}};
    });
  }

  if (wants(cfg, "gns")) {
    out.group("gns.build", [&] {
      const MomentFunctional phi = moments_from_schur(B);
      const GnsSpace g = build_gns(phi);
      const RowIsometryDefect rd = row_isometry_defect(g);
      const Mat C = cauchy_transform(g);
      const Mat K = herglotz_kernel_from_H(transpose_series(cayley_to_herglotz(B)), Side::Right).G;
      const Mat transport = C.adjoint() * pinv(K, 1e-10) * C - Mat::Identity(g.rank(), g.rank());
      const DbrSpace sR = dbr_space(transpose_series(B), Side::Right);
      const WeightedCauchy wc = weighted_cauchy(g, sR);
      const TranspositionReport tr = transposition_W(B);
      return std::vector<Entry>{
          {"gns.gram_psd", psd_violation(g.gram), 1e-9},
          {"gns.stinespring", stinespring_check(g), 1e-8, N - 1},
          {"gns.row_isometry", rd.isometry_defect, 1e-8, N - 1},
          {"cauchy.gram_transport", op_norm(transport), 1e-8},
          {"cauchy.weighted_unitary", unitarity(wc.W), 1e-8},
          {"cauchy.weighted_leak", wc.leak, 1e-8},
          {"cauchy.transposition", tr.transposition_error, 1e-9},
          {"cauchy.transposition_unitary", tr.unitarity_defect, 1e-9}};
    });
  }

  if (wants(cfg, "clark")) {
    out.group("clark.verify", [&] {
      const ClarkReport r = verify_clark(Bwide, N);
      const GleasonUniqueness u = gleason_uniqueness(transpose_series(B));
      return std::vector<Entry>{
          {"clark.operator_identity_safe", r.lhs_rhs_error, 1e-7, r.safe_degree},
          {"clark.operator_identity_full", r.lhs_rhs_error_full, 1e-7, N},
          {"clark.kernel_identity", r.kernel_identity_error, 1e-10, N - 1},
          {"clark.perturbation_identity", r.clarkB_error, 1e-7, r.safe_degree},
          {"clark.weighted_unitary", r.transform_defect, 1e-8},
          {"clark.gleason_shift", r.gleason_shift_error, 1e-10, N - 1},
          {"clark.gleason_contractive", std::max(0.0, r.gleason_contractivity), 1e-9},
          {"clark.gleason_unique", u.nullity > 0 ? kInf : std::max(u.distance, u.residual), 1e-8}};
    });
    out.group("clark.family", [&] {
      const Mat U = random_unitary(B.m, cfg.seed + 1);
      const ClarkFamilyReport f = clark_family(Bwide, U, N);
      return std::vector<Entry>{{"clark.family_D_invariance", f.D_invariance, 1e-12},
                                {"clark.family_identity", f.clark.lhs_rhs_error_full, 1e-7, N}};
    });
  }

  if (wants(cfg, "lift") && lift_of) {
    out.group("lift.check_free_lift", [&] {
      const FreeLiftReport r = check_free_lift(Bwide, *lift_of);
      return std::vector<Entry>{{"lift.check_free_lift", std::max(r.series_error, r.moment_error), 1e-9}};
    });
  }

  if (wants(cfg, "realize")) {
    out.group("realize.free", [&] {
      const Colligation c = free_colligation(Bwide, Side::Right, N);
      const FreeSeries T = transfer_coeffs(c, std::max(0, N - 1));
      const ColligationDefects df = colligation_defects(c);
      double nil = 0.0;
      if (N >= 1) {
        const int order = std::min(N, 4);
        for (int k = 0; k < 3; ++k) {
          const NCPoint p = random_nilpotent_point(B.d, order, cfg.seed + 100 + k);
          nil = std::max(nil, max_abs(transfer_eval(c, p) - eval_nc(B, p)));
        }
      }
      const int rank = observability_rank(c, N);
      return std::vector<Entry>{{"realize.transfer_coeffs", series_distance(T, B), 1e-10, N - 1},
                                {"realize.nilpotent_exactness", nil, 1e-10},
                                {"realize.coisometry_safe", df.coisometry_safe, 1e-7, N - 1},
                                {"realize.contractive", df.contraction, 1e-7},
                                {"realize.observability_deficit", static_cast<double>(c.state_dim() - rank), 0.0}};
    });
  }
}

void comm_suites(const CommSeries& binst, const VerifyConfig& cfg, CheckList& out) {
  const int N = cfg.N;
  const CommSeries b = binst.truncated(N);

  if (wants(cfg, "herglotz")) {
    out.group("herglotz.comm", [&] {
      const CommSeries H = comm_cayley(b);
      const CommMomentFunctional mu = comm_moments(b);
      const CommSeries b2 = comm_cayley_inv(comm_herglotz_from_moments(mu));
      return std::vector<Entry>{{"herglotz.comm_round_trip", series_distance(comm_cayley_inv(H), b), 1e-11},
                                {"herglotz.comm_moment_round_trip", series_distance(b2, b), 1e-10},
                                {"kernels.comm_dbr_psd", psd_violation(comm_dbr_space(b).D), 1e-9}};
    });
  }
  if (wants(cfg, "gns")) {
    out.group("gns.comm", [&] {
      const CommHerglotzSpace hs = build_herglotz_space(comm_moments(b));
      const CommDbrSpace cb = comm_dbr_space(b);
      const WeightedCauchy wc = comm_weighted_cauchy(hs, cb);
      return std::vector<Entry>{{"gns.symmetric_gram_psd", psd_violation(hs.gram), 1e-9},
                                {"cauchy.comm_weighted_unitary", unitarity(wc.W), 1e-8}};
    });
  }
  if (wants(cfg, "lift") || wants(cfg, "clark")) {
    out.group("lift.build", [&] {
      const CommHerglotzSpace hs = build_herglotz_space(comm_moments(b));
      const VbReport vb = build_Vb(hs);
      std::vector<Entry> e{{"lift.vb_partial_isometry", std::max(vb.partial_isometry_defect, vb.spectrum_defect), 1e-8}};
      const RowContractionExt exts[2] = {vb.V, random_extension(vb, cfg.seed + 7, 0.5)};
      const char* tags[2] = {"tight", "random"};
      for (int k = 0; k < 2; ++k) {
        const std::string t = std::string("lift.") + tags[k] + ".";
        const auto lift = lift_from_extension(hs, exts[k], N + 1);
        const FreeLiftReport fl = check_free_lift(lift.first, b);
        e.push_back({t + "check_free_lift", std::max(fl.series_error, fl.moment_error), 1e-9});
        e.push_back({t + "resolvent_identity", resolvent_identity_error(hs, exts[k]), 1e-9});
        e.push_back({t + "dilation", dilation_error(hs, exts[k]), 1e-8, N - 1});
        const FreeSeries BL = lift.first.truncated(N);
        e.push_back({t + "symmetric_gram_compression",
                     symmetric_gram_compression_error(moments_from_schur(BL), hs.mu), 1e-10});
        e.push_back({t + "c_h2_coisometry", c_h2(BL, b, Side::Right).coisometry_defect, 1e-8});
        e.push_back({t + "freeabel_factorization", freeabel_factorization_error(BL, b), 1e-8});
        if (wants(cfg, "clark"))
          e.push_back({"clark." + std::string(tags[k]) + "_lift_identity", verify_clark(lift.first, N).lhs_rhs_error_full,
                       1e-7, N});
      }
      return e;
    });
  }
  if (wants(cfg, "realize")) {
    out.group("realize.comm", [&] {
      const CommHerglotzSpace hs = build_herglotz_space(comm_moments(b));
      const VbReport vb = build_Vb(hs);
      const CommDbrSpace cb = comm_dbr_space(b);
      const RowContractionExt D = random_extension(vb, cfg.seed + 7, 0.5);
      const auto lift = lift_from_extension(hs, D, N + 1);
      const Colligation fromFree =
          comm_colligation_from_free(free_colligation(lift.first, Side::Right, N), c_h2(lift.first.truncated(N), b, Side::Right).C);
      const Colligation fromD = comm_colligation_from_D(hs, D, cb);
      const CommSeries tc = symmetrize_series(transfer_coeffs(fromD, std::max(0, N - 1)));
      const ColligationDefects df = colligation_defects(fromD);
      std::vector<cplx> z(b.d, cplx(0.3 / std::sqrt(static_cast<double>(b.d)), 0.0));
      const double tail = max_abs(comm_transfer_eval(fromD, z) - comm_eval(b.truncated(std::max(0, N - 1)), z));
      const double bound = comm_tail_bound(0.3, std::max(0, N - 1));
      return std::vector<Entry>{{"realize.route_agreement", colligation_distance(fromFree, fromD), 1e-8},
                                {"realize.comm_transfer_coeffs", series_distance(tc, b), 1e-9, N - 1},
                                {"realize.comm_contractive", df.contraction, 1e-7},
                                {"realize.comm_tail_bound", std::max(0.0, tail - bound), 0.0}};
    });
  }
}

int config_N(const Instance& inst, int requested) {
  if (requested >= 0) return requested;
  if (inst.metadata.contains("verify_N") && inst.metadata.at("verify_N").is_number_integer())
    return inst.metadata.at("verify_N").get<int>();
  return inst.kind == "free" ? inst.free->N : inst.comm->N;
}

std::string output_or_stdout(const std::string& path, const std::string& text) {
  if (path.empty()) std::cout << text << '\n';
  else write_text_file(path, text);
  return text;
}

json certification(const FreeSeries& F) {
  const NormBounds nb = schur_norm_bounds(F, TruncatedFock(F.d, F.m, F.N));
  std::string by = nb.upper <= 1.0 ? "l1_upper" : (nb.lower > 1.0 ? "not_contractive" : "uncertified");
  return {{"l1_upper", nb.upper}, {"compressed_lower", nb.lower}, {"certified_by", by},
          {"non_unital", op_norm(F[0]) < 1.0 - kNonUnitalMargin}};
}

json certification(const CommSeries& f) {
  const double l1 = f.l1_norm();
  return {{"l1_upper", l1}, {"certified_by", l1 <= 1.0 ? "l1_upper" : "uncertified"},
          {"non_unital", op_norm(f[0]) < 1.0 - kNonUnitalMargin}};
}

Instance load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

}  // namespace

json check_to_json(const Check& c) {
  json j = {{"check", c.name},
            {"status", c.pass ? "pass" : "fail"},
            {"max_error", std::isfinite(c.max_error) ? json(c.max_error) : json(nullptr)},
            {"tolerance", c.tolerance},
            {"safe_degree", c.safe_degree},
            {"runtime_ms", c.runtime_ms}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

std::vector<Check> run_suites(const Instance& inst, const VerifyConfig& cfg_in) {
  static const char* suites[] = {"all", "herglotz", "gns", "clark", "lift", "realize"};
  if (std::find(std::begin(suites), std::end(suites), cfg_in.suite) == std::end(suites))
    throw ConfigError("unknown suite '" + cfg_in.suite + "'");
  VerifyConfig cfg = cfg_in;
  cfg.N = config_N(inst, cfg_in.N);
  check_alphabet(1, cfg.N);
  CheckList out(cfg);
  if (inst.kind == "free") free_suites(*inst.free, inst.lift_of, cfg, out);
  else comm_suites(*inst.comm, cfg, out);
  return out.take();
}

json make_report(const std::vector<Check>& checks, const json& config) {
  json arr = json::array();
  bool pass = true;
  for (const Check& c : checks) {
    arr.push_back(check_to_json(c));
    pass = pass && c.pass;
  }
  return {{"tool", "freeclark"}, {"version", kToolVersion}, {"config", config}, {"checks", arr}, {"pass", pass}};
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Free Aleksandrov-Clark computations on truncated Fock space"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random non-unital Schur instance");
  int g_d = 2, g_m = 1, g_deg = 2, g_N = 6;
  double g_rho = 0.8;
  std::uint64_t g_seed = 0;
  std::string g_mode = "free", g_out;
  gen->add_option("--d", g_d, "number of variables");
  gen->add_option("--m", g_m, "coefficient size");
  gen->add_option("--deg", g_deg, "polynomial degree");
  gen->add_option("--N", g_N, "truncation degree");
  gen->add_option("--rho", g_rho, "l1 norm of the output");
  gen->add_option("--seed", g_seed, "random seed")->required();
  gen->add_option("--mode", g_mode, "free or comm")->check(CLI::IsMember({"free", "comm"}));
  gen->add_option("-o,--output", g_out, "output file");

  // verify
  auto* ver = app.add_subcommand("verify", "Run verification suites on an instance");
  std::string v_in, v_suite = "all", v_out, v_config;
  int v_N = -1;
  std::optional<double> v_tol;
  std::optional<std::uint64_t> v_seed;
  ver->add_option("instance", v_in, "instance file")->required();
  ver->add_option("--N", v_N, "truncation degree");
  ver->add_option("--suite", v_suite, "all|herglotz|gns|clark|lift|realize");
  ver->add_option("--tol", v_tol, "tolerance applied to every check");
  ver->add_option("--config", v_config, "JSON config with N, suite, seed, tolerances");
  ver->add_option("--seed", v_seed, "seed for random unitaries, extensions and points");
  ver->add_option("-o,--output", v_out, "report file");

  // moments
  auto* mom = app.add_subcommand("moments", "Moment data of the Clark map");
  std::string m_in, m_out;
  int m_len = -1;
  mom->add_option("instance", m_in, "instance file")->required();
  mom->add_option("--max-len", m_len, "largest word length");
  mom->add_option("-o,--output", m_out, "output file");

  // lift
  auto* lif = app.add_subcommand("lift", "Free lift of a commutative Schur instance");
  std::string l_in, l_ext = "tight", l_out, l_report;
  double l_rho = 0.5;
  lif->add_option("--comm", l_in, "commutative instance file")->required();
  lif->add_option("--extension", l_ext, "tight or random:SEED");
  lif->add_option("--rho", l_rho, "norm of the random extension part");
  lif->add_option("-o,--output", l_out, "lift instance file");
  lif->add_option("--report", l_report, "report file (stdout when absent)");

  // realize
  auto* rea = app.add_subcommand("realize", "Transfer-function evaluation or coefficients");
  std::string r_in, r_point, r_out;
  int r_coeffs = -1, r_N = -1;
  rea->add_option("instance", r_in, "instance file")->required();
  auto* opt_point = rea->add_option("--point", r_point, "point file");
  auto* opt_coeffs = rea->add_option("--coeffs", r_coeffs, "largest coefficient degree");
  opt_point->excludes(opt_coeffs);
  rea->add_option("--N", r_N, "truncation degree");
  rea->add_option("-o,--output", r_out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    if (*gen) {
      Instance inst;
      inst.kind = g_mode;
      json meta = {{"seed", g_seed},
                   {"generator", {{"d", g_d}, {"m", g_m}, {"deg", g_deg}, {"N", g_N}, {"rho", g_rho}, {"mode", g_mode}}}};
      if (g_mode == "free") {
        inst.free = random_free_schur(g_d, g_m, g_deg, g_rho, g_seed, g_N);
        meta["certification"] = certification(*inst.free);
      } else {
        inst.comm = random_comm_schur(g_d, g_m, g_deg, g_rho, g_seed, g_N);
        meta["certification"] = certification(*inst.comm);
      }
      inst.metadata = meta;
      output_or_stdout(g_out, dump17(instance_to_json(inst)));
      return kExitPass;
    }

    if (*ver) {
      const Instance inst = load_instance(v_in);
      VerifyConfig cfg;
      if (!v_config.empty()) {
        const json c = read_json_file(v_config);
        if (c.contains("N")) cfg.N = c.at("N").get<int>();
        if (c.contains("suite")) cfg.suite = c.at("suite").get<std::string>();
        if (c.contains("seed")) cfg.seed = c.at("seed").get<std::uint64_t>();
        if (c.contains("tol")) cfg.tol = c.at("tol").get<double>();
        if (c.contains("tolerances"))
          for (auto it = c.at("tolerances").begin(); it != c.at("tolerances").end(); ++it)
            cfg.tolerances[it.key()] = it.value().get<double>();
      }
      if (v_N >= 0) cfg.N = v_N;
      if (ver->count("--suite")) cfg.suite = v_suite;
      if (v_tol) cfg.tol = v_tol;
      if (v_seed) cfg.seed = *v_seed;
      else if (v_config.empty() && inst.metadata.contains("seed") && inst.metadata.at("seed").is_number_unsigned())
        cfg.seed = inst.metadata.at("seed").get<std::uint64_t>();
      const std::vector<Check> checks = run_suites(inst, cfg);
      json config = {{"instance", v_in}, {"N", config_N(inst, cfg.N)}, {"suite", cfg.suite}, {"seed", cfg.seed}};
      if (cfg.tol) config["tol"] = *cfg.tol;
      const json report = make_report(checks, config);
      output_or_stdout(v_out, dump17(report));
      return report.at("pass").get<bool>() ? kExitPass : kExitFail;
    }

    if (*mom) {
      const Instance inst = load_instance(m_in);
      json out;
      if (inst.kind == "free") {
        const int K = m_len >= 0 ? m_len : inst.free->N;
        out = moments_to_json(moments_from_schur(inst.free->truncated(K)));
      } else {
        const int K = m_len >= 0 ? m_len : inst.comm->N;
        out = moments_to_json(comm_moments(inst.comm->truncated(K)));
      }
      output_or_stdout(m_out, dump17(out));
      return kExitPass;
    }

    if (*lif) {
      const json src = read_json_file(l_in);
      CommSeries b;
      json src_meta = json::object();
      if (src.contains("kind")) {
        const Instance inst = instance_from_json(src);
        if (inst.kind != "comm") throw ConfigError("lift: --comm expects a commutative instance");
        b = *inst.comm;
        src_meta = inst.metadata;
      } else {
        b = comm_series_from_json(src);
      }
      const CommHerglotzSpace hs = build_herglotz_space(comm_moments(b));
      const VbReport vb = build_Vb(hs);
      RowContractionExt D;
      json ext = {{"type", l_ext}};
      if (l_ext == "tight") {
        D = vb.V;
      } else if (l_ext.rfind("random:", 0) == 0) {
        std::uint64_t seed = 0;
        try {
          seed = std::stoull(l_ext.substr(7));
        } catch (const std::exception&) {
          throw ConfigError("lift: --extension random:SEED needs an integer seed");
        }
        D = random_extension(vb, seed, l_rho);
        ext = {{"type", "random"}, {"seed", seed}, {"rho", l_rho}};
      } else {
        throw ConfigError("lift: --extension must be tight or random:SEED");
      }
      const int N = b.N;
      const auto lift = lift_from_extension(hs, D, N + 1);
      Instance out;
      out.kind = "free";
      out.free = lift.first;
      out.lift_of = b;
      out.metadata = {{"generator", "lift"}, {"extension", ext}, {"verify_N", N}, {"source", src_meta}};

      CheckList checks(VerifyConfig{});
      checks.group("lift.check_free_lift", [&] {
        const FreeLiftReport fl = check_free_lift(lift.first, b);
        return std::vector<Entry>{{"lift.check_free_lift", std::max(fl.series_error, fl.moment_error), 1e-9},
                                  {"lift.vb_partial_isometry", std::max(vb.partial_isometry_defect, vb.spectrum_defect), 1e-8},
                                  {"lift.resolvent_identity", resolvent_identity_error(hs, D), 1e-9},
                                  {"lift.dilation", dilation_error(hs, D), 1e-8, N - 1}};
      });
      json report = make_report(checks.take(), {{"comm", l_in}, {"extension", ext}, {"N", N}});
      report["quasi_extreme_indicator"] = comm_quasi_extreme_indicator(hs);
      report["extension_row_norm"] = op_norm(D.row);
      if (!l_out.empty()) write_text_file(l_out, dump17(instance_to_json(out)));
      output_or_stdout(l_report, dump17(report));
      return report.at("pass").get<bool>() ? kExitPass : kExitFail;
    }

    if (*rea) {
      const Instance inst = load_instance(r_in);
      if (r_point.empty() && r_coeffs < 0) throw ConfigError("realize: give --point or --coeffs");
      json out;
      bool ok = true;
      if (inst.kind == "free") {
        const int N = r_N >= 0 ? r_N : config_N(inst, -1);
        const Colligation c = free_colligation(*inst.free, Side::Right, N);
        out["state_dim"] = c.state_dim();
        if (!r_point.empty()) {
          NCPoint p = point_from_json(read_json_file(r_point));
          const Mat v = transfer_eval(c, p);
          out["value"] = matrix_to_json(v);
          if (p.nilpotent_order > 0) {
            const double err = max_abs(v - eval_nc(inst.free->truncated(N), p));
            const bool applies = p.nilpotent_order <= N;
            out["nilpotent_check"] = {{"order", p.nilpotent_order}, {"max_error", err}, {"tolerance", 1e-10},
                                      {"status", !applies ? "skipped" : (err <= 1e-10 ? "pass" : "fail")}};
            ok = !applies || err <= 1e-10;
          }
        } else {
          out["coeffs"] = series_to_json(transfer_coeffs(c, r_coeffs));
        }
      } else {
        const CommSeries& b = *inst.comm;
        const CommHerglotzSpace hs = build_herglotz_space(comm_moments(b));
        const Colligation c = comm_colligation_from_D(hs, build_Vb(hs).V, comm_dbr_space(b));
        out["state_dim"] = c.state_dim();
        if (!r_point.empty()) {
          const json pj = read_json_file(r_point);
          if (!pj.contains("z") || !pj.at("z").is_array()) throw ConfigError("realize: comm point needs a z array");
          std::vector<cplx> z;
          for (const auto& e : pj.at("z")) {
            if (e.is_number()) z.emplace_back(e.get<double>(), 0.0);
            else z.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
          }
          out["value"] = matrix_to_json(comm_transfer_eval(c, z));
        } else {
          out["coeffs"] = series_to_json(symmetrize_series(transfer_coeffs(c, r_coeffs)));
        }
      }
      output_or_stdout(r_out, dump17(out));
      return ok ? kExitPass : kExitFail;
    }
  } catch (const ConfigError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DimensionError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitInput;
}

}  // namespace freeclark
