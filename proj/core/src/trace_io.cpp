#include "nmls/trace_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace nmls {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double get_num(const json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw Error(ErrorCode::Parse, "expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

json vec(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num(v[i]));
  return out;
}

Vector get_vec(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = get_num(j[i]);
  return v;
}

json trial_json(const TrialRecord& t) {
  return {{"l", t.l}, {"step", num(t.step)}, {"f", num(t.f_trial)}, {"nu", num(t.nu_trial)},
          {"accepted", t.accepted}};
}

TrialRecord trial_from(const json& j) {
  TrialRecord t;
  t.l = j.at("l").get<int>();
  t.step = get_num(j.at("step"));
  t.f_trial = get_num(j.at("f"));
  t.nu_trial = get_num(j.at("nu"));
  t.accepted = j.at("accepted").get<bool>();
  return t;
}

json trials_json(const std::vector<TrialRecord>& ts) {
  json out = json::array();
  for (const auto& t : ts) out.push_back(trial_json(t));
  return out;
}

std::vector<TrialRecord> trials_from(const json& j) {
  std::vector<TrialRecord> out;
  for (const auto& t : j) out.push_back(trial_from(t));
  return out;
}

json header_json(const Trace& t) {
  json params = json::object();
  for (const auto& [k, v] : t.rule_params) params[k] = num(v);
  return {
      {"type", "header"},
      {"format", kFormatVersion},
      {"problem_id", t.problem_id},
      {"rule_id", t.rule_id},
      {"direction_id", t.direction_id},
      {"rule_params", params},
      {"config",
       {{"alpha0", num(t.config.alpha0)},
        {"beta", num(t.config.beta)},
        {"rho", num(t.config.rho)},
        {"grad_tol", num(t.config.grad_tol)},
        {"k_max", t.config.k_max},
        {"l_max", t.config.l_max},
        {"step_floor", num(t.config.step_floor)}}},
      {"termination", std::string(to_string(t.termination))},
      {"iterations", t.records.size()},
      {"total_f_evals", t.total_f_evals},
      {"total_grad_evals", t.total_grad_evals},
      {"final_x", vec(t.final_x)},
      {"final_f", num(t.final_f)},
      {"final_grad_norm", num(t.final_grad_norm)},
      {"aborted_trials", trials_json(t.aborted_trials)},
  };
}

json record_json(const IterationRecord& r) {
  return {
      {"type", "iteration"},
      {"k", r.k},
      {"x", vec(r.x)},
      {"f", num(r.f)},
      {"grad_norm", num(r.grad_norm)},
      {"alpha", num(r.alpha_in)},
      {"l", r.l_accepted},
      {"nu", num(r.nu)},
      {"trials", trials_json(r.trials)},
      {"d", vec(r.direction)},
      {"d_dot_g", num(r.direction_dot_grad)},
      {"d_norm", num(r.direction_norm)},
      {"direction_reset", r.direction_reset},
      {"update_applied", r.update_applied},
      {"secant_residual", num(r.secant_residual)},
  };
}

IterationRecord record_from(const json& j) {
  IterationRecord r;
  r.k = j.at("k").get<int>();
  r.x = get_vec(j.at("x"));
  r.f = get_num(j.at("f"));
  r.grad_norm = get_num(j.at("grad_norm"));
  r.alpha_in = get_num(j.at("alpha"));
  r.l_accepted = j.at("l").get<int>();
  r.nu = get_num(j.at("nu"));
  r.trials = trials_from(j.at("trials"));
  r.direction = get_vec(j.at("d"));
  r.direction_dot_grad = get_num(j.at("d_dot_g"));
  r.direction_norm = get_num(j.at("d_norm"));
  r.direction_reset = j.at("direction_reset").get<bool>();
  r.update_applied = j.at("update_applied").get<bool>();
  r.secant_residual = get_num(j.at("secant_residual"));
  return r;
}

}  // namespace

void write_trace(std::ostream& out, const Trace& trace) {
  out << header_json(trace).dump() << '\n';
  for (const auto& r : trace.records) out << record_json(r).dump() << '\n';
}

Trace read_trace(std::istream& in) {
  Trace t;
  std::string line;
  std::size_t lineno = 0;
  std::size_t expected = 0;
  bool have_header = false;
  try {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const json j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "header") {
        if (have_header) throw Error(ErrorCode::Parse, "duplicate header");
        have_header = true;
        t.problem_id = j.at("problem_id").get<std::string>();
        t.rule_id = j.at("rule_id").get<std::string>();
        t.direction_id = j.at("direction_id").get<std::string>();
        for (const auto& [k, v] : j.at("rule_params").items()) t.rule_params[k] = get_num(v);
        const auto& c = j.at("config");
        t.config.alpha0 = get_num(c.at("alpha0"));
        t.config.beta = get_num(c.at("beta"));
        t.config.rho = get_num(c.at("rho"));
        t.config.grad_tol = get_num(c.at("grad_tol"));
        t.config.k_max = c.at("k_max").get<int>();
        t.config.l_max = c.at("l_max").get<int>();
        t.config.step_floor = get_num(c.at("step_floor"));
        t.termination = termination_from_string(j.at("termination").get<std::string>());
        expected = j.at("iterations").get<std::size_t>();
        t.total_f_evals = j.at("total_f_evals").get<std::size_t>();
        t.total_grad_evals = j.at("total_grad_evals").get<std::size_t>();
        t.final_x = get_vec(j.at("final_x"));
        t.final_f = get_num(j.at("final_f"));
        t.final_grad_norm = get_num(j.at("final_grad_norm"));
        t.aborted_trials = trials_from(j.at("aborted_trials"));
      } else if (type == "iteration") {
        if (!have_header) throw Error(ErrorCode::Parse, "iteration record before header");
        t.records.push_back(record_from(j));
      } else {
        throw Error(ErrorCode::Parse, "unknown record type '" + type + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, "trace line " + std::to_string(lineno) + ": " + e.what());
  }
  if (!have_header) throw Error(ErrorCode::Parse, "trace has no header");
  if (t.records.size() != expected) {
    throw Error(ErrorCode::Parse, "trace header announces " + std::to_string(expected) +
                                      " iterations, found " + std::to_string(t.records.size()));
  }
  return t;
}

void save_trace(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write_trace(out, trace);
  if (!out) throw Error(ErrorCode::Io, "error writing " + path.string());
}

Trace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_trace(in);
}

std::string trace_to_string(const Trace& trace) {
  std::ostringstream out;
  write_trace(out, trace);
  return out.str();
}

Trace trace_from_string(const std::string& text) {
  std::istringstream in(text);
  return read_trace(in);
}

}  // namespace nmls
