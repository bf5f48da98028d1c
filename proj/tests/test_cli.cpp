#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "freeclark/cli.hpp"
#include "test_util.hpp"

using namespace freeclark;
using namespace testutil;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path p = fs::temp_directory_path() / ("freeclark_cli_" + std::to_string(::getpid()));
  TempDir() { fs::create_directories(p); }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(p, ec);
  }
};

const fs::path& workdir() {
  static const TempDir dir;
  return dir.p;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

int run(const std::string& args) {
  const std::string cmd = std::string(FREECLARK_CLI_PATH) + " " + args + " >" + path("stdout.txt") + " 2>" + path("stderr.txt");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_instance(const std::string& name, const Instance& inst) { write_text_file(path(name), dump17(instance_to_json(inst))); }

Instance free_instance(const FreeSeries& B) {
  Instance i;
  i.kind = "free";
  i.free = B;
  return i;
}

Instance comm_instance(const CommSeries& b) {
  Instance i;
  i.kind = "comm";
  i.comm = b;
  return i;
}

const json* find_check(const json& report, const std::string& name) {
  for (const auto& c : report.at("checks"))
    if (c.at("check") == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("gen is deterministic and certified") {
  REQUIRE(run("gen --d 1 --deg 1 --seed 7 -o " + path("a.json")) == 0);
  REQUIRE(run("gen --d 1 --deg 1 --seed 7 -o " + path("b.json")) == 0);
  CHECK(slurp(path("a.json")) == slurp(path("b.json")));

  REQUIRE(run("gen --d 2 --m 2 --deg 2 --rho 0.8 --seed 3 --N 4 -o " + path("g.json")) == 0);
  const Instance g = instance_from_json(read_json_file(path("g.json")));
  CHECK(g.free->l1_norm() <= 0.8 + 1e-12);
  CHECK(op_norm(g.free->coeff("")) <= 0.8 + 1e-12);
  CHECK(g.metadata.at("seed") == 3);
  CHECK(g.metadata.at("certification").at("certified_by") == "l1_upper");
  CHECK(psd_check(dbr_kernel(*g.free, Side::Right).G).pass);
  // Same data as the library generator.
  CHECK(series_err(*g.free, random_free_schur(2, 2, 2, 0.8, 3, 4)) == 0.0);

  REQUIRE(run("gen --mode comm --d 2 --deg 2 --rho 0.5 --seed 1 --N 3 -o " + path("c.json")) == 0);
  const Instance c = instance_from_json(read_json_file(path("c.json")));
  CHECK(c.kind == "comm");
  CHECK(c.comm->l1_norm() <= 0.5 + 1e-12);
}

TEST_CASE("gen rejects invalid parameters") {
  CHECK(run("gen --d 2 --rho 1.5 --seed 1") == 2);
  CHECK(run("gen --d 10 --seed 1") == 2);
  CHECK(run("gen --d 2 --deg 7 --N 6 --seed 1") == 2);
  CHECK(run("gen --d 2") == 2);
  CHECK(run("gen --d 2 --seed 1 --mode quantum") == 2);
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("verify on b = 0 passes with tiny errors") {
  write_instance("zero.json", free_instance(FreeSeries(2, 1, 3)));
  REQUIRE(run("verify " + path("zero.json") + " -o " + path("zero_report.json")) == 0);
  const json r = read_json_file(path("zero_report.json"));
  CHECK(r.at("pass") == true);
  CHECK(r.at("tool") == "freeclark");
  CHECK(r.at("version") == kToolVersion);
  CHECK(r.at("config").at("N") == 3);
  CHECK(r.at("config").contains("seed"));
  std::vector<std::string> names;
  for (const auto& c : r.at("checks")) {
    names.push_back(c.at("check"));
    CHECK(c.at("status") == "pass");
    CHECK(c.at("max_error").get<double>() < 1e-10);
    for (const char* key : {"tolerance", "safe_degree", "runtime_ms"}) CHECK(c.contains(key));
  }
  CHECK(std::is_sorted(names.begin(), names.end()));
  CHECK(names.size() > 20);
}

TEST_CASE("verify d=1 B=z, clark suite") {
  write_instance("z.json", free_instance(scalar_series(1, 4, {{"1", 1.0}})));
  REQUIRE(run("verify " + path("z.json") + " --suite clark -o " + path("z_report.json")) == 0);
  const json r = read_json_file(path("z_report.json"));
  for (const auto& c : r.at("checks")) CHECK(c.at("check").get<std::string>().rfind("clark.", 0) == 0);
  CHECK(find_check(r, "clark.operator_identity_full") != nullptr);
}

TEST_CASE("verify output matches the library") {
  const FreeSeries B = random_free_schur(2, 1, 2, 0.8, 5, 3);
  write_instance("lib.json", free_instance(B));
  REQUIRE(run("verify " + path("lib.json") + " --seed 9 -o " + path("lib_report.json")) == 0);
  const json r = read_json_file(path("lib_report.json"));
  VerifyConfig cfg;
  cfg.seed = 9;
  const auto checks = run_suites(free_instance(B), cfg);
  REQUIRE(checks.size() == r.at("checks").size());
  for (std::size_t i = 0; i < checks.size(); ++i) {
    CHECK(r.at("checks")[i].at("check") == checks[i].name);
    CHECK(r.at("checks")[i].at("max_error").get<double>() == checks[i].max_error);
  }
}

TEST_CASE("corrupted lift pair fails the lift suite") {
  REQUIRE(run("gen --mode comm --d 2 --deg 2 --rho 0.7 --seed 2 --N 3 -o " + path("cb.json")) == 0);
  REQUIRE(run("lift --comm " + path("cb.json") + " --extension random:4 -o " + path("lift.json") + " --report " +
              path("lift_report.json")) == 0);
  REQUIRE(run("verify " + path("lift.json") + " --suite lift") == 0);

  Instance bad = instance_from_json(read_json_file(path("lift.json")));
  bad.free->at("12")(0, 0) += 1e-3;
  write_instance("bad_lift.json", bad);
  CHECK(run("verify " + path("bad_lift.json") + " --suite lift -o " + path("bad_report.json")) == 1);
  const json r = read_json_file(path("bad_report.json"));
  CHECK(r.at("pass") == false);
  const json* c = find_check(r, "lift.check_free_lift");
  REQUIRE(c != nullptr);
  CHECK(c->at("status") == "fail");
}

TEST_CASE("tolerance overrides") {
  write_instance("tol.json", free_instance(random_free_schur(2, 1, 2, 0.8, 6, 3)));
  // A negative tolerance cannot be met.
  CHECK(run("verify " + path("tol.json") + " --suite herglotz --tol -1") == 1);
  write_text_file(path("cfg.json"), R"({"suite": "gns", "tolerances": {"gns.stinespring": -1}})");
  CHECK(run("verify " + path("tol.json") + " --config " + path("cfg.json") + " -o " + path("cfg_report.json")) == 1);
  const json r = read_json_file(path("cfg_report.json"));
  CHECK(find_check(r, "gns.stinespring")->at("status") == "fail");
  CHECK(find_check(r, "gns.row_isometry")->at("status") == "pass");
  CHECK(run("verify " + path("tol.json") + " --suite nonsense") == 2);
}

TEST_CASE("input errors exit with code 2") {
  write_text_file(path("broken.json"), "{ not json");
  CHECK(run("verify " + path("broken.json")) == 2);
  CHECK(run("verify " + path("missing.json")) == 2);
  write_text_file(path("kind.json"), R"({"kind": "banana", "series": {}})");
  CHECK(run("verify " + path("kind.json")) == 2);
  write_text_file(path("word.json"), R"({"kind": "free", "series": {"d": 2, "m": 1, "N": 2, "coeffs": {"3": [[1]]}}})");
  CHECK(run("verify " + path("word.json")) == 2);
}

TEST_CASE("unital instances fail the checks that need the Cayley transform") {
  write_instance("unital.json", free_instance(FreeSeries::identity(2, 1, 2)));
  CHECK(run("verify " + path("unital.json") + " -o " + path("unital_report.json")) == 1);
  const json r = read_json_file(path("unital_report.json"));
  CHECK(r.at("pass") == false);
  CHECK(find_check(r, "herglotz.round_trip")->at("status") == "fail");
  CHECK(find_check(r, "gns.build")->at("status") == "fail");
  // The dB-R kernel needs no Cayley transform.
  CHECK(find_check(r, "kernels.dbr_psd")->at("status") == "pass");
}

TEST_CASE("moments reproduces the library") {
  write_instance("m1.json", free_instance(scalar_series(1, 4, {{"1", 1.0}})));
  REQUIRE(run("moments " + path("m1.json") + " -o " + path("m1_out.json")) == 0);
  const MomentFunctional ones = moments_from_json(read_json_file(path("m1_out.json")));
  for (int k = 1; k <= 4; ++k) CHECK(std::abs(ones.moment(Word(k, '1'))(0, 0) - 1.0) < 1e-14);

  write_instance("m2.json", free_instance(scalar_series(2, 3, {{"1", 0.5}, {"2", 0.5}})));
  REQUIRE(run("moments " + path("m2.json") + " --max-len 2 -o " + path("m2_out.json")) == 0);
  const MomentFunctional half = moments_from_json(read_json_file(path("m2_out.json")));
  CHECK(half.N == 2);
  CHECK(std::abs(half.moment("21")(0, 0) - 0.25) < 1e-15);

  write_instance("m0.json", free_instance(FreeSeries(2, 2, 2)));
  REQUIRE(run("moments " + path("m0.json") + " -o " + path("m0_out.json")) == 0);
  CHECK(slurp(path("m0_out.json")) == dump17(moments_to_json(moments_from_schur(FreeSeries(2, 2, 2)))) + "\n");

  const CommSeries b = random_comm_schur(2, 1, 2, 0.7, 3, 3);
  write_instance("mc.json", comm_instance(b));
  REQUIRE(run("moments " + path("mc.json") + " -o " + path("mc_out.json")) == 0);
  CHECK(slurp(path("mc_out.json")) == dump17(moments_to_json(comm_moments(b))) + "\n");
}

TEST_CASE("lift command") {
  SUBCASE("one variable: the lift is b") {
    const CommSeries b = scalar_comm(1, 3, {{{0}, 0.1}, {{1}, 0.5}});
    write_instance("l1.json", comm_instance(b));
    REQUIRE(run("lift --comm " + path("l1.json") + " -o " + path("l1_out.json") + " --report " + path("l1_rep.json")) == 0);
    const Instance L = instance_from_json(read_json_file(path("l1_out.json")));
    for (int k = 0; k <= 3; ++k) CHECK(max_abs(L.free->coeff(Word(k, '1')) - b.coeff({k})) < 1e-10);
    CHECK(L.lift_of.has_value());
  }
  SUBCASE("two variables: tight and random differ, both pass") {
    const CommSeries b = scalar_comm(2, 3, {{{1, 0}, 0.5}, {{0, 1}, 0.5}});
    write_instance("l2.json", comm_instance(b));
    REQUIRE(run("lift --comm " + path("l2.json") + " -o " + path("l2_t.json") + " --report " + path("l2_tr.json")) == 0);
    REQUIRE(run("lift --comm " + path("l2.json") + " --extension random:3 -o " + path("l2_r.json") + " --report " +
                path("l2_rr.json")) == 0);
    const Instance T = instance_from_json(read_json_file(path("l2_t.json")));
    const Instance R = instance_from_json(read_json_file(path("l2_r.json")));
    CHECK(series_err(*T.free, *R.free) > 1e-3);
    const json rep = read_json_file(path("l2_tr.json"));
    CHECK(rep.at("quasi_extreme_indicator").get<double>() > 0.01);
    CHECK(find_check(rep, "lift.check_free_lift")->at("status") == "pass");
    CHECK(run("verify " + path("l2_t.json")) == 0);
    CHECK(run("verify " + path("l2_r.json")) == 0);
  }
  SUBCASE("quasi-extreme b = z has a unique lift") {
    write_instance("lz.json", comm_instance(scalar_comm(1, 4, {{{1}, 1.0}})));
    REQUIRE(run("lift --comm " + path("lz.json") + " -o " + path("lz_t.json") + " --report " + path("lz_tr.json")) == 0);
    REQUIRE(run("lift --comm " + path("lz.json") + " --extension random:8 -o " + path("lz_r.json") + " --report " +
                path("lz_rr.json")) == 0);
    CHECK(read_json_file(path("lz_tr.json")).at("quasi_extreme_indicator").get<double>() < 1e-10);
    CHECK(series_err(*instance_from_json(read_json_file(path("lz_t.json"))).free,
                     *instance_from_json(read_json_file(path("lz_r.json"))).free) < 1e-12);
  }
  CHECK(run("lift --comm " + path("l2.json") + " --extension wobbly") == 2);
  CHECK(run("lift --comm " + path("zero.json")) == 2);
}

TEST_CASE("realize command") {
  const FreeSeries B = random_free_schur(2, 1, 2, 0.9, 8, 5);
  write_instance("r.json", free_instance(B));
  const NCPoint p = random_nilpotent_point(2, 4, 3);
  write_text_file(path("pt.json"), dump17(point_to_json(p)));
  REQUIRE(run("realize " + path("r.json") + " --point " + path("pt.json") + " -o " + path("r_out.json")) == 0);
  const json out = read_json_file(path("r_out.json"));
  CHECK(out.at("nilpotent_check").at("status") == "pass");
  CHECK(max_abs(matrix_from_json(out.at("value")) - eval_nc(B, p)) < 1e-10);

  REQUIRE(run("realize " + path("r.json") + " --coeffs 4 -o " + path("rc_out.json")) == 0);
  const FreeSeries T = free_series_from_json(read_json_file(path("rc_out.json")).at("coeffs"));
  CHECK(series_err(T, B.truncated(4)) < 1e-10);
  CHECK(slurp(path("rc_out.json")) ==
        dump17(json{{"coeffs", series_to_json(transfer_coeffs(free_colligation(B, Side::Right, 5), 4))},
                    {"state_dim", free_colligation(B, Side::Right, 5).state_dim()}}) +
            "\n");

  const CommSeries b = random_comm_schur(2, 1, 2, 0.7, 4, 3);
  write_instance("rcomm.json", comm_instance(b));
  write_text_file(path("z.json"), R"({"z": [[0.2, 0.1], 0.0]})");
  REQUIRE(run("realize " + path("rcomm.json") + " --point " + path("z.json") + " -o " + path("rz_out.json")) == 0);
  const Mat v = matrix_from_json(read_json_file(path("rz_out.json")).at("value"));
  const double tail = max_abs(v - comm_eval(b.truncated(2), {cplx(0.2, 0.1), 0.0}));
  CHECK(tail <= comm_tail_bound(std::abs(cplx(0.2, 0.1)), 2));

  CHECK(run("realize " + path("r.json")) == 2);
  CHECK(run("realize " + path("r.json") + " --coeffs 2 --point " + path("pt.json")) == 2);
  write_text_file(path("farpt.json"), R"({"n": 1, "Z": [[[3.0]], [[0.0]]]})");
  // The truncated colligation has nilpotent A, so any point evaluates; no self-check without an order.
  REQUIRE(run("realize " + path("r.json") + " --point " + path("farpt.json") + " -o " + path("far_out.json")) == 0);
  CHECK_FALSE(read_json_file(path("far_out.json")).contains("nilpotent_check"));
}

TEST_CASE("floats are written with 17 significant digits") {
  const json j = {{"x", 0.1}};
  CHECK(dump17(j).find("0.10000000000000001") != std::string::npos);
  CHECK(dump17(json{{"y", std::numeric_limits<double>::infinity()}}).find("null") != std::string::npos);
}
