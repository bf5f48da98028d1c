#include "freeclark/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace freeclark {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("malformed JSON: " + what);
}

int get_int(const json& j, const char* key) {
  require(j.is_object() && j.contains(key) && j.at(key).is_number_integer(), std::string("integer field '") + key + "'");
  return j.at(key).get<int>();
}

void dump_rec(const json& j, int indent, int depth, std::string& out) {
  auto pad = [&](int lvl) {
    if (indent > 0) out += '\n' + std::string(static_cast<std::size_t>(lvl * indent), ' ');
  };
  switch (j.type()) {
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      break;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      bool scalars = true;
      for (const auto& e : j) scalars = scalars && !e.is_structured();
      // Innermost arrays and [re, im] rows stay on one line.
      bool flat = scalars;
      if (!flat) {
        flat = true;
        for (const auto& e : j) {
          if (!e.is_array()) flat = false;
          else
            for (const auto& x : e) flat = flat && !x.is_structured();
        }
        flat = flat && j.size() <= 64 && j.front().size() <= 2;
      }
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        if (!flat) pad(depth + 1);
        dump_rec(e, flat ? 0 : indent, depth + 1, out);
        first = false;
      }
      if (!flat) pad(depth);
      out += ']';
      break;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        pad(depth + 1);
        out += json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        dump_rec(it.value(), indent, depth + 1, out);
        first = false;
      }
      pad(depth);
      out += '}';
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

json matrix_to_json(const Mat& A) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < A.cols(); ++k) row.push_back({A(i, k).real(), A(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const json& j) {
  require(j.is_array(), "matrix must be an array of rows");
  const int r = static_cast<int>(j.size());
  const int c = r == 0 ? 0 : static_cast<int>(j.at(0).size());
  Mat A(r, c);
  for (int i = 0; i < r; ++i) {
    require(j.at(i).is_array() && static_cast<int>(j.at(i).size()) == c, "matrix rows must have equal length");
    for (int k = 0; k < c; ++k) {
      const json& e = j.at(i).at(k);
      if (e.is_number()) {
        A(i, k) = e.get<double>();
      } else {
        require(e.is_array() && e.size() == 2 && e.at(0).is_number() && e.at(1).is_number(),
                "complex entries are [re, im] pairs");
        A(i, k) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
      }
    }
  }
  return A;
}

json series_to_json(const FreeSeries& F) {
  json c = json::object();
  for (int a = 0; a < F.size(); ++a) c[F.words->word(a)] = matrix_to_json(F[a]);
  return {{"d", F.d}, {"m", F.m}, {"N", F.N}, {"coeffs", c}};
}

FreeSeries free_series_from_json(const json& j) {
  const int d = get_int(j, "d"), m = get_int(j, "m"), N = get_int(j, "N");
  check_alphabet(d, N);
  require(m >= 1, "m must be positive");
  FreeSeries F(d, m, N);
  if (j.contains("coeffs")) {
    require(j.at("coeffs").is_object(), "coeffs must be an object");
    for (auto it = j.at("coeffs").begin(); it != j.at("coeffs").end(); ++it) {
      check_word(it.key(), d);
      const Mat v = matrix_from_json(it.value());
      require(v.rows() == m && v.cols() == m, "coefficient '" + it.key() + "' must be m x m");
      F.at(it.key()) = v;
    }
  }
  return F;
}

json series_to_json(const CommSeries& f) {
  json c = json::object();
  for (int i = 0; i < f.size(); ++i) c[multi_key(f.multis->item(i))] = matrix_to_json(f[i]);
  return {{"d", f.d}, {"m", f.m}, {"N", f.N}, {"coeffs", c}};
}

CommSeries comm_series_from_json(const json& j) {
  const int d = get_int(j, "d"), m = get_int(j, "m"), N = get_int(j, "N");
  check_alphabet(d, N);
  require(m >= 1, "m must be positive");
  CommSeries f(d, m, N);
  if (j.contains("coeffs")) {
    require(j.at("coeffs").is_object(), "coeffs must be an object");
    for (auto it = j.at("coeffs").begin(); it != j.at("coeffs").end(); ++it) {
      const Mat v = matrix_from_json(it.value());
      require(v.rows() == m && v.cols() == m, "coefficient '" + it.key() + "' must be m x m");
      f.at(parse_multi_key(it.key(), d)) = v;
    }
  }
  return f;
}

json moments_to_json(const MomentFunctional& phi) {
  json mo = json::object();
  for (int a = 1; a < phi.words->size(); ++a) mo[phi.words->word(a)] = matrix_to_json(phi[a]);
  return {{"d", phi.d}, {"m", phi.m}, {"N", phi.N}, {"phi_I", matrix_to_json(phi.phi_I)}, {"moments", mo}};
}

MomentFunctional moments_from_json(const json& j) {
  const int d = get_int(j, "d"), m = get_int(j, "m"), N = get_int(j, "N");
  check_alphabet(d, N);
  MomentFunctional phi(d, m, N);
  require(j.contains("phi_I"), "phi_I missing");
  phi.set(0, matrix_from_json(j.at("phi_I")));
  if (j.contains("moments"))
    for (auto it = j.at("moments").begin(); it != j.at("moments").end(); ++it) {
      check_word(it.key(), d);
      const int i = phi.words->index(it.key());
      require(i >= 0, "moment word longer than N");
      phi.set(i, matrix_from_json(it.value()));
    }
  return phi;
}

json moments_to_json(const CommMomentFunctional& mu) {
  json mo = json::object();
  for (int i = 1; i < mu.multis->size(); ++i) mo[multi_key(mu.multis->item(i))] = matrix_to_json(mu[i]);
  return {{"d", mu.d},
          {"m", mu.m},
          {"N", mu.N},
          {"mu_I", matrix_to_json(mu.mu_I)},
          {"imag_I", matrix_to_json(mu.imag_I)},
          {"moments", mo}};
}

CommMomentFunctional comm_moments_from_json(const json& j) {
  const int d = get_int(j, "d"), m = get_int(j, "m"), N = get_int(j, "N");
  check_alphabet(d, N);
  CommMomentFunctional mu(d, m, N);
  require(j.contains("mu_I"), "mu_I missing");
  mu.set(0, matrix_from_json(j.at("mu_I")));
  if (j.contains("imag_I")) mu.imag_I = matrix_from_json(j.at("imag_I"));
  if (j.contains("moments"))
    for (auto it = j.at("moments").begin(); it != j.at("moments").end(); ++it) {
      const int i = mu.multis->index(parse_multi_key(it.key(), d));
      require(i >= 0, "moment index beyond N");
      mu.set(i, matrix_from_json(it.value()));
    }
  return mu;
}

json kernel_to_json(const CoeffKernel& K) {
  json c = json::object();
  const WordTable& t = *K.words;
  for (int a = 0; a < t.size(); ++a)
    for (int b = 0; b < t.size(); ++b) c[t.word(a) + "|" + t.word(b)] = matrix_to_json(K.entry(a, b));
  json out = {{"d", K.d}, {"m", K.m}, {"N", K.N}, {"coeffs", c}};
  if (!K.warning.empty()) out["warning"] = K.warning;
  return out;
}

json point_to_json(const NCPoint& p) {
  json Z = json::array();
  for (const Mat& z : p.Z) Z.push_back(matrix_to_json(z));
  json out = {{"n", p.n}, {"Z", Z}};
  if (p.nilpotent_order > 0) out["nilpotent_order"] = p.nilpotent_order;
  return out;
}

NCPoint point_from_json(const json& j) {
  NCPoint p;
  p.n = get_int(j, "n");
  require(j.contains("Z") && j.at("Z").is_array(), "point needs a Z array");
  for (const auto& z : j.at("Z")) {
    Mat m = matrix_from_json(z);
    require(m.rows() == p.n && m.cols() == p.n, "point matrices must be n x n");
    p.Z.push_back(std::move(m));
  }
  if (j.contains("nilpotent_order")) p.nilpotent_order = get_int(j, "nilpotent_order");
  return p;
}

json colligation_to_json(const Colligation& c) {
  json A = json::array(), B = json::array();
  for (const Mat& a : c.A) A.push_back(matrix_to_json(a));
  for (const Mat& b : c.Bblk) B.push_back(matrix_to_json(b));
  return {{"A", A}, {"B", B}, {"C", matrix_to_json(c.C)}, {"D", matrix_to_json(c.D)}, {"state_dim", c.state_dim()}};
}

json extension_to_json(const RowContractionExt& D) {
  json blocks = json::array();
  for (int j = 1; j <= D.d(); ++j) blocks.push_back(matrix_to_json(D.D(j)));
  return {{"D", blocks}, {"tight", D.tight}};
}

json instance_to_json(const Instance& inst) {
  json out = {{"kind", inst.kind}, {"metadata", inst.metadata}};
  if (inst.kind == "free") out["series"] = series_to_json(*inst.free);
  else out["series"] = series_to_json(*inst.comm);
  if (inst.lift_of) out["lift_of"] = series_to_json(*inst.lift_of);
  return out;
}

Instance instance_from_json(const json& j) {
  require(j.is_object() && j.contains("kind") && j.at("kind").is_string(), "instance needs a kind");
  require(j.contains("series"), "instance needs a series");
  Instance inst;
  inst.kind = j.at("kind").get<std::string>();
  if (inst.kind == "free") inst.free = free_series_from_json(j.at("series"));
  else if (inst.kind == "comm") inst.comm = comm_series_from_json(j.at("series"));
  else throw ConfigError("instance kind must be 'free' or 'comm'");
  if (j.contains("lift_of")) inst.lift_of = comm_series_from_json(j.at("lift_of"));
  if (j.contains("metadata")) inst.metadata = j.at("metadata");
  return inst;
}

std::string dump17(const json& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text << '\n';
}

}  // namespace freeclark
