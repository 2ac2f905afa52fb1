// Copyright 2026 The vnelab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vnelab/scenario.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "vnelab/batch.hpp"
#include "vnelab/induction.hpp"

namespace vnelab::cli {
namespace {

constexpr const char* kVersion = VNELAB_VERSION;

// A JSON object together with its path, for error messages and for
// rejecting unknown keys.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return j_; }

  [[noreturn]] void fail(const std::string& what) const {
    const bool root = !path_.empty() && path_.back() == ':';
    throw ScenarioError(path_ + (root ? "/: " : ": ") + what);
  }

  void require_object(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) fail("expected an object");
    for (const auto& [key, _] : j_.items()) {
      const bool known = std::any_of(allowed.begin(), allowed.end(),
                                     [&](const char* a) { return key == a; });
      if (!known) fail("unknown field '" + key + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  Node at(const char* key) const {
    if (!j_.contains(key)) fail(std::string("missing field '") + key + "'");
    return Node(j_.at(key), path_ + "/" + key);
  }
  Node at(std::size_t i) const { return Node(j_.at(i), path_ + "/" + std::to_string(i)); }

  std::string str() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  long long integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<long long>();
  }
  double real() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }
  std::size_t array_size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }
  // A number or a [re, im] pair.
  Complex complex() const {
    if (j_.is_number()) return j_.get<double>();
    if (j_.is_array() && j_.size() == 2 && j_[0].is_number() && j_[1].is_number())
      return {j_[0].get<double>(), j_[1].get<double>()};
    fail("expected a number or a [re, im] pair");
  }

 private:
  const json& j_;
  std::string path_;
};

GroupSpec parse_group_spec(const Node& n) {
  const std::string type = n.at("type").str();
  if (type == "cyclic" || type == "dihedral" || type == "symmetric") {
    n.require_object({"type", "n"});
    const long long k = n.at("n").integer();
    if (k < 1 || k > 4096) n.at("n").fail("out of range");
    const int v = static_cast<int>(k);
    if (type == "cyclic") return GroupSpec::cyclic(v);
    if (type == "dihedral") return GroupSpec::dihedral(v);
    return GroupSpec::symmetric(v);
  }
  if (type == "product") {
    n.require_object({"type", "factors"});
    const Node f = n.at("factors");
    std::vector<GroupSpec> factors;
    for (std::size_t i = 0; i < f.array_size(); ++i) factors.push_back(parse_group_spec(f.at(i)));
    return GroupSpec::direct_product(std::move(factors));
  }
  if (type == "table") {
    n.require_object({"type", "table"});
    const Node t = n.at("table");
    std::vector<std::vector<int>> rows;
    for (std::size_t i = 0; i < t.array_size(); ++i) {
      const Node row = t.at(i);
      std::vector<int> r;
      for (std::size_t k = 0; k < row.array_size(); ++k)
        r.push_back(static_cast<int>(row.at(k).integer()));
      rows.push_back(std::move(r));
    }
    return GroupSpec::from_table(std::move(rows));
  }
  n.at("type").fail("unknown group type '" + type + "'");
}

template <class T>
const T& resolve(const std::map<std::string, T>& m, const Node& n, const char* what) {
  const std::string name = n.str();
  auto it = m.find(name);
  if (it == m.end()) n.fail(std::string("unknown ") + what + " '" + name + "'");
  return it->second;
}

CouplingRecord parse_coupling(const Node& n, const std::map<std::string, GroupPtr>& groups) {
  const std::string type = n.at("type").str();
  if (type == "diagonal") {
    n.require_object({"type", "group"});
    return build_diagonal_coupling(resolve(groups, n.at("group"), "group"));
  }
  if (type == "me_product") {
    n.require_object({"type", "gamma", "lambda"});
    return build_me_product_coupling(resolve(groups, n.at("gamma"), "group"),
                                     resolve(groups, n.at("lambda"), "group"));
  }
  if (type == "wstar") {
    n.require_object({"type", "gamma", "lambda", "pairing"});
    std::vector<int> pairing;
    if (n.has("pairing")) {
      const Node p = n.at("pairing");
      for (std::size_t i = 0; i < p.array_size(); ++i)
        pairing.push_back(static_cast<int>(p.at(i).integer()));
    }
    return build_wstar_coupling(resolve(groups, n.at("gamma"), "group"),
                                resolve(groups, n.at("lambda"), "group"), std::move(pairing));
  }
  n.at("type").fail("unknown coupling type '" + type + "'");
}

std::vector<GroupFunction> parse_multiplier(const Node& n,
                                            const std::map<std::string, GroupPtr>& groups,
                                            std::optional<std::uint64_t> scenario_seed) {
  const std::string type = n.at("type").str();
  const GroupPtr& g = resolve(groups, n.at("group"), "group");
  auto element = [&](const Node& e) {
    const long long v = e.integer();
    if (v < 0 || v >= g->order()) e.fail("element index out of range");
    return static_cast<Element>(v);
  };
  if (type == "delta") {
    n.require_object({"type", "group", "at"});
    return {GroupFunction::delta(g, element(n.at("at")))};
  }
  if (type == "constant") {
    n.require_object({"type", "group", "value"});
    return {GroupFunction::constant(g, n.at("value").complex())};
  }
  if (type == "explicit") {
    n.require_object({"type", "group", "values"});
    const Node vs = n.at("values");
    if (static_cast<int>(vs.array_size()) != g->order())
      vs.fail("expected " + std::to_string(g->order()) + " values");
    Eigen::VectorXcd v(g->order());
    for (int i = 0; i < g->order(); ++i) v[i] = vs.at(i).complex();
    return {GroupFunction(g, std::move(v))};
  }
  if (type == "random") {
    n.require_object({"type", "group", "seed", "positive_definite", "count"});
    if (!n.has("seed") && !scenario_seed)
      n.fail("random multiplier needs a seed here or at the top level");
    const std::uint64_t local = n.has("seed") ? static_cast<std::uint64_t>(n.at("seed").integer()) : 0;
    const bool pd = n.has("positive_definite") && n.at("positive_definite").boolean();
    const long long count = n.has("count") ? n.at("count").integer() : 1;
    if (count < 1 || count > 10000) n.at("count").fail("out of range");
    // Both seeds feed the generator, so --seed changes every random family.
    std::seed_seq seq{static_cast<std::uint32_t>(local), static_cast<std::uint32_t>(local >> 32),
                      static_cast<std::uint32_t>(scenario_seed.value_or(0)),
                      static_cast<std::uint32_t>(scenario_seed.value_or(0) >> 32)};
    std::mt19937_64 rng(seq);
    std::vector<GroupFunction> out;
    for (long long i = 0; i < count; ++i)
      out.push_back(pd ? random_positive_definite(g, rng) : random_multiplier(g, rng));
    return out;
  }
  n.at("type").fail("unknown multiplier type '" + type + "'");
}

const std::set<std::string> kTaskTypes = {"norm", "induce", "verify", "kernel",
                                          "koopman_check"};

void check_task_fields(const Node& n, const std::string& type) {
  if (type == "norm")
    n.require_object({"type", "id", "multiplier", "norms", "expect_b2", "expect_q"});
  else if (type == "induce")
    n.require_object({"type", "id", "coupling", "multiplier", "expect"});
  else if (type == "verify")
    n.require_object({"type", "id", "coupling", "multiplier", "mixing"});
  else if (type == "kernel")
    n.require_object({"type", "id", "coupling", "expect_identity", "expect_rows",
                      "expect_index"});
  else
    n.require_object({"type", "id", "coupling"});
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

Scenario parse_scenario(const std::string& text, const std::string& source,
                        const Overrides& ov) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte);
    std::ostringstream os;
    os << source << ":" << line << ":" << col << ": invalid JSON: " << e.what();
    throw ScenarioError(os.str());
  }

  Scenario s;
  s.digest = sha256_hex(text);
  const Node root(doc, source + ":");
  try {
    root.require_object({"schema", "name", "seed", "tolerances", "groups", "couplings",
                         "multipliers", "tasks"});
    if (root.at("schema").integer() != kSchemaVersion)
      root.at("schema").fail("unsupported schema version (expected 1)");
    s.name = root.at("name").str();

    std::optional<std::uint64_t> seed;
    if (root.has("seed")) {
      const long long v = root.at("seed").integer();
      if (v < 0) root.at("seed").fail("must be nonnegative");
      seed = static_cast<std::uint64_t>(v);
    }
    if (ov.seed) seed = ov.seed;
    s.seed = seed.value_or(0);

    if (root.has("tolerances")) {
      const Node t = root.at("tolerances");
      t.require_object({"sdp", "verify", "max_iter"});
      if (t.has("sdp")) s.sdp_tol = t.at("sdp").real();
      if (t.has("verify")) s.verify_tol = t.at("verify").real();
      if (t.has("max_iter")) s.max_iter = static_cast<int>(t.at("max_iter").integer());
    }
    if (ov.tol) s.sdp_tol = *ov.tol;
    if (ov.max_iter) s.max_iter = *ov.max_iter;
    if (!(s.sdp_tol > 0.0) || !(s.verify_tol > 0.0))
      throw ScenarioError(source + ": tolerances must be positive");
    if (s.max_iter < 1) throw ScenarioError(source + ": max_iter must be at least 1");

    const Node groups = root.at("groups");
    if (!groups.raw().is_object()) groups.fail("expected an object");
    for (const auto& [name, _] : groups.raw().items())
      s.groups.emplace(name, build_group(parse_group_spec(groups.at(name.c_str()))));

    if (root.has("couplings")) {
      const Node cs = root.at("couplings");
      if (!cs.raw().is_object()) cs.fail("expected an object");
      for (const auto& [name, _] : cs.raw().items()) {
        const Node c = cs.at(name.c_str());
        try {
          CouplingRecord rec = parse_coupling(c, s.groups);
          rec.name = name;
          s.couplings.emplace(name, std::move(rec));
        } catch (const ScenarioError&) {
          throw;
        } catch (const Error& e) {
          c.fail(e.what());
        }
      }
    }

    if (root.has("multipliers")) {
      const Node ms = root.at("multipliers");
      if (!ms.raw().is_object()) ms.fail("expected an object");
      for (const auto& [name, _] : ms.raw().items())
        s.multipliers.emplace(name, parse_multiplier(ms.at(name.c_str()), s.groups, seed));
    }

    const Node tasks = root.at("tasks");
    for (std::size_t i = 0; i < tasks.array_size(); ++i) {
      const Node t = tasks.at(i);
      if (!t.raw().is_object()) t.fail("expected an object");
      const std::string type = t.at("type").str();
      if (!kTaskTypes.count(type)) t.at("type").fail("unknown task type '" + type + "'");
      check_task_fields(t, type);
      if (t.has("coupling")) resolve(s.couplings, t.at("coupling"), "coupling");
      if (t.has("multiplier")) resolve(s.multipliers, t.at("multiplier"), "multiplier");
      const std::string id =
          t.has("id") ? t.at("id").str() : std::to_string(i) + ":" + type;
      s.tasks.push_back({id, type, t.raw()});
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    // Library validation (group tables, coupling invariants) of scenario data.
    throw ScenarioError(source + ": " + e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path, const Overrides& overrides) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ScenarioError(path.string() + ": cannot open scenario file");
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_scenario(buf.str(), path.string(), overrides);
}

namespace {

json complex_array(const Eigen::VectorXcd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    a.push_back({round12(v[i].real()), round12(v[i].imag())});
  return a;
}

json certificate_json(const NormCertificate& c) {
  return {{"value", round12(c.value)},
          {"status", sdp::to_string(c.status)},
          {"gap", round12(c.gap)},
          {"primal_residual", round12(c.primal_residual)},
          {"dual_residual", round12(c.dual_residual)},
          {"iterations", c.iterations}};
}

std::string suffix(std::size_t i, std::size_t count) {
  return count == 1 ? "" : "[" + std::to_string(i) + "]";
}

// Records the solver certificate; a non-optimal solve marks the task as a
// solver failure.
void record_solve(TaskResult& t, const std::string& name, const NormCertificate& c,
                  const Scenario& s) {
  t.add(name, c.value);
  t.add(name + ".gap", c.gap, s.sdp_tol);
  t.add(name + ".residual",
        std::max(c.primal_residual, c.dual_residual), s.sdp_tol);
  if (!c.optimal()) {
    t.status = TaskStatus::kError;
    t.notes.push_back(name + ": solver " + sdp::to_string(c.status) + ": " + c.message);
  }
}

void run_norm(const Scenario& s, const json& f, TaskResult& t, const NormOptions& opts) {
  const auto& family = s.multipliers.at(f.at("multiplier").get<std::string>());
  std::vector<std::string> norms = {"b2"};
  if (f.contains("norms")) norms = f["norms"].get<std::vector<std::string>>();
  for (const auto& n : norms)
    if (n != "b2" && n != "q" && n != "oracle" && n != "witness")
      throw ScenarioError("task " + t.id + ": unknown norm '" + n + "'");
  auto wants = [&](const char* n) { return std::find(norms.begin(), norms.end(), n) != norms.end(); };

  json members = json::array();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const GroupFunction& phi = family[i];
    const std::string sx = suffix(i, family.size());
    json m = {{"values", complex_array(phi.values)}};
    std::optional<NormCertificate> b2;
    if (wants("b2") || wants("oracle") || f.contains("expect_b2")) {
      b2 = b2_norm_certified(phi, opts);
      record_solve(t, "b2_norm" + sx, *b2, s);
      t.add("sup_norm_excess" + sx, phi.sup_norm() - b2->value, s.sdp_tol);
      m["b2"] = certificate_json(*b2);
      if (f.contains("expect_b2"))
        t.add("b2_expect_deviation" + sx,
              std::abs(b2->value - f["expect_b2"].get<double>()), s.verify_tol);
    }
    if (wants("oracle")) {
      if (phi.group->is_abelian()) {
        const double o = abelian_b2_oracle(phi);
        t.add("abelian_b2_oracle" + sx, o);
        t.add("b2_oracle_deviation" + sx, std::abs(o - b2->value), s.verify_tol);
      } else {
        t.notes.push_back("oracle" + sx + ": group is not abelian, skipped");
      }
    }
    if (wants("q") || f.contains("expect_q")) {
      const NormCertificate q = q_norm_certified(phi, opts);
      record_solve(t, "q_norm" + sx, q, s);
      t.add("q_excess_over_l1" + sx, q.value - phi.l1_norm(), s.sdp_tol);
      m["q"] = certificate_json(q);
      if (phi.group->is_abelian())
        t.add("q_oracle_deviation" + sx, std::abs(q.value - abelian_q_oracle(phi)),
              s.verify_tol);
      if (f.contains("expect_q"))
        t.add("q_expect_deviation" + sx, std::abs(q.value - f["expect_q"].get<double>()),
              s.verify_tol);
    }
    if (wants("witness")) {
      NormCertificate c;
      try {
        const WitnessPair w = extract_witnesses(phi, opts, &c);
        t.add("witness_reproduction_error" + sx, w.reproduction_error(phi), s.sdp_tol);
        t.add("witness_product_excess" + sx, w.sup_xi * w.sup_eta - c.value, s.sdp_tol);
        m["witness_dimension"] = w.dimension();
      } catch (const SolverFailure& e) {
        t.status = TaskStatus::kError;
        t.notes.push_back(std::string("witness") + sx + ": " + e.what());
      }
    }
    members.push_back(std::move(m));
  }
  t.data["multipliers"] = std::move(members);
}

void run_induce(const Scenario& s, const json& f, TaskResult& t) {
  const auto& c = s.couplings.at(f.at("coupling").get<std::string>());
  const auto& family = s.multipliers.at(f.at("multiplier").get<std::string>());
  const InductionKernel k = induction_kernel(c);
  const auto induced = batch::induce_all(k, family, Execution::kParallel);
  json members = json::array();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const std::string sx = suffix(i, family.size());
    const GroupFunction& phi = family[i];
    const GroupFunction& hat = induced[i];
    t.add("sup_norm_excess" + sx, hat.sup_norm() - phi.sup_norm(), 1e-12);
    t.add("identity_value_deviation" + sx, std::abs(hat(0) - phi(0)), 1e-12);
    members.push_back({{"phi", complex_array(phi.values)}, {"phi_hat", complex_array(hat.values)}});
  }
  if (f.contains("expect")) {
    if (family.size() != 1)
      throw ScenarioError("task " + t.id + ": 'expect' needs a single multiplier");
    const Node e(f["expect"], "task " + t.id + "/expect");
    if (static_cast<int>(e.array_size()) != induced[0].size())
      e.fail("expected " + std::to_string(induced[0].size()) + " values");
    double dev = 0.0;
    for (int g = 0; g < induced[0].size(); ++g)
      dev = std::max(dev, std::abs(induced[0](g) - e.at(g).complex()));
    t.add("expect_deviation", dev, 1e-10);
  }
  t.data["induced"] = std::move(members);
  if (c.pairing) t.data["pairing"] = *c.pairing;
}

void run_verify(const Scenario& s, const json& f, TaskResult& t, const NormOptions& opts) {
  const auto& c = s.couplings.at(f.at("coupling").get<std::string>());
  const auto& family = s.multipliers.at(f.at("multiplier").get<std::string>());
  const InductionKernel k = induction_kernel(c);
  const auto reports = batch::verify_all(k, family, s.verify_tol, opts, Execution::kParallel);
  json members = json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const LemmaReport& r = reports[i];
    const std::string sx = suffix(i, reports.size());
    for (const auto& ch : r.checks) {
      if (std::isnan(ch.value)) t.status = TaskStatus::kError;
      t.add(ch.quantity + sx, ch.value, ch.threshold);
    }
    for (const auto& n : r.notes) t.notes.push_back(n + sx);
    members.push_back({{"phi", complex_array(r.phi)},
                       {"phi_hat", complex_array(r.phi_hat)},
                       {"b2_phi", certificate_json(r.b2_phi)},
                       {"b2_phi_hat", certificate_json(r.b2_phi_hat)},
                       {"phi_positive_definite", r.phi_positive_definite}});
  }
  if (f.value("mixing", false))
    t.notes.push_back(
        "mixing: skipped; a finite group has no mixing actions, so the c0 statement is vacuous");
  t.data["multipliers"] = std::move(members);
  if (c.pairing) t.data["pairing"] = *c.pairing;
}

void run_kernel(const Scenario& s, const json& f, TaskResult& t) {
  const auto& c = s.couplings.at(f.at("coupling").get<std::string>());
  const InductionKernel k = induction_kernel(c, Execution::kParallel);
  t.add("trace_form_defect", k.trace_form_defect, 1e-12);
  t.add("row_sum_defect", k.row_sum_defect(), 1e-10);
  t.add("negative_entry", std::max(0.0, -k.min_entry()), 1e-12);
  const double index = coupling_index(c);
  t.add("index", index);
  const auto exact = exact_coupling_index(c);
  std::string exact_str;
  if (exact) exact_str = std::to_string(exact->first) + "/" + std::to_string(exact->second);

  if (f.value("expect_identity", false)) {
    if (k.k.rows() != k.k.cols()) throw ScenarioError("task " + t.id + ": kernel is not square");
    t.add("identity_deviation",
          (k.k - Eigen::MatrixXd::Identity(k.k.rows(), k.k.cols())).cwiseAbs().maxCoeff(),
          1e-10);
  }
  if (f.contains("expect_rows")) {
    const Node rows(f["expect_rows"], "task " + t.id + "/expect_rows");
    for (std::size_t i = 0; i < rows.array_size(); ++i) {
      const Node r = rows.at(i);
      r.require_object({"gamma", "row"});
      const long long g = r.at("gamma").integer();
      if (g < 0 || g >= k.k.rows()) r.at("gamma").fail("element index out of range");
      const Node vals = r.at("row");
      if (static_cast<Eigen::Index>(vals.array_size()) != k.k.cols())
        vals.fail("expected " + std::to_string(k.k.cols()) + " entries");
      double dev = 0.0;
      for (Eigen::Index j = 0; j < k.k.cols(); ++j)
        dev = std::max(dev, std::abs(k.k(g, j) - vals.at(j).real()));
      t.add("row_deviation[" + std::to_string(g) + "]", dev, 1e-10);
    }
  }
  if (f.contains("expect_index")) {
    const std::string want = f["expect_index"].get<std::string>();
    // 0 when the exact fraction matches, 1 otherwise.
    t.add("index_mismatch", (exact && exact_str == want) ? 0.0 : 1.0, 0.0);
  }

  json rows = json::array();
  for (Eigen::Index g = 0; g < k.k.rows(); ++g) {
    json row = json::array();
    for (Eigen::Index j = 0; j < k.k.cols(); ++j) row.push_back(round12(k.k(g, j)));
    rows.push_back(std::move(row));
  }
  t.data["kernel"] = std::move(rows);
  t.data["index"] = round12(index);
  if (exact) t.data["index_exact"] = exact_str;
  if (c.pairing) t.data["pairing"] = *c.pairing;
}

void koopman_checks(TaskResult& t, const std::string& prefix, const TraceAction& a,
                    const AlgebraElement& domain) {
  const KoopmanMatrix km = koopman(a);
  const KoopmanDefects d = koopman_defects(a, km);
  t.add(prefix + ".unitarity", d.unitarity, 1e-10);
  t.add(prefix + ".multiplicativity", d.multiplicativity, 1e-10);
  t.add(prefix + ".implements_action", d.implements_action, 1e-10);
  const Eigen::VectorXcd chi = koopman_character(km);
  double off = 0.0;
  for (Eigen::Index g = 1; g < chi.size(); ++g) off = std::max(off, std::abs(chi[g]));
  t.add(prefix + ".character_off_identity", off, 1e-8);
  t.add(prefix + ".character_at_identity", chi[0].real());
  t.add(prefix + ".partition_defect", partition_defect(a, domain), 1e-10);
  t.add(prefix + ".equivariance_defect", equivariance_defect(a, domain), 1e-10);
}

void run_koopman(const Scenario& s, const json& f, TaskResult& t) {
  const auto& c = s.couplings.at(f.at("coupling").get<std::string>());
  koopman_checks(t, "gamma", c.gamma_action, c.q);
  koopman_checks(t, "lambda", c.lambda_action, c.p);
  t.add("commutation_defect", commutation_defect(c.gamma_action, c.lambda_action), 1e-10);
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Report run(const Scenario& s, const Overrides& ov) {
  Report r;
  r.version = kVersion;
  r.scenario = s.name;
  r.digest = s.digest;
  r.seed = s.seed;
  r.sdp_tol = s.sdp_tol;
  r.verify_tol = s.verify_tol;
  r.max_iter = s.max_iter;
  if (ov.timestamps) r.timestamp = utc_now();
  const NormOptions opts{s.sdp_tol, s.max_iter};

  for (const auto& spec : s.tasks) {
    TaskResult t;
    t.id = spec.id;
    t.type = spec.type;
    const auto start = std::chrono::steady_clock::now();
    try {
      if (spec.type == "norm")
        run_norm(s, spec.fields, t, opts);
      else if (spec.type == "induce")
        run_induce(s, spec.fields, t);
      else if (spec.type == "verify")
        run_verify(s, spec.fields, t, opts);
      else if (spec.type == "kernel")
        run_kernel(s, spec.fields, t);
      else
        run_koopman(s, spec.fields, t);
    } catch (const ScenarioError&) {
      throw;
    } catch (const SolverFailure& e) {
      t.status = TaskStatus::kError;
      t.notes.push_back(e.what());
    } catch (const Error& e) {
      // Structural failures surface as a failed task, not a crash.
      t.status = TaskStatus::kError;
      t.notes.push_back(e.what());
    }
    t.settle();
    if (ov.timestamps)
      t.wall_seconds = round12(
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    r.tasks.push_back(std::move(t));
  }
  return r;
}

Report run_scenario(const std::filesystem::path& path, const Overrides& overrides) {
  return run(load_scenario(path, overrides), overrides);
}

}  // namespace vnelab::cli
