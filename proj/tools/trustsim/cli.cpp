#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "trustsim/csv.hpp"
#include "trustsim/errors.hpp"

namespace trustsim::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kVersion = "0.1.0";

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ConfigError(std::string(what) + ": '" + std::string(s) + "' is not a non-negative integer");
  return v;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    if (!f.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string json_scalar(const Json& v, std::string_view key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number_float()) return v.dump();
  throw ConfigError("override '" + std::string(key) + "' must be a string, number or boolean");
}

std::vector<std::uint64_t> json_seeds(const Json& v) {
  if (v.is_string()) return parse_seeds(v.get<std::string>());
  if (!v.is_array()) throw ConfigError("'seeds' must be an array or a string like \"1-10\"");
  std::vector<std::uint64_t> out;
  for (const Json& s : v) {
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
      throw ConfigError("'seeds' entries must be non-negative integers");
    out.push_back(s.get<std::uint64_t>());
  }
  return out;
}

// ---- per-seed work -------------------------------------------------------

struct Job {
  const ParamSet* params = nullptr;
  std::uint64_t seed = 0;
  fs::path dir;  // root that receives metrics/ and series/
  std::vector<PolicyRun> result;
};

std::string metrics_csv(const PolicyRun& r) {
  std::ostringstream os;
  CsvWriter w(os, {"metric", "value"});
  for (const auto& [k, v] : r.metrics) {
    w << k << v;
    w.end_row();
  }
  return os.str();
}

std::string series_csv(const PolicyRun& r) {
  std::ostringstream os;
  CsvWriter w(os, {"figure", "series", "x", "y"});
  for (const Series& s : r.series)
    for (const auto& [x, y] : s.points) {
      w << s.figure << s.name << x << y;
      w.end_row();
    }
  return os.str();
}

std::string seed_file(std::uint64_t seed) { return "seed-" + std::to_string(seed) + ".csv"; }

void run_jobs(const Resolved& r, std::vector<Job>& jobs, std::ostream& log) {
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      {
        std::lock_guard lock(mu);
        if (failure) return;
      }
      Job& job = jobs[i];
      try {
        job.result = run_preset(*r.preset, *job.params, r.policies, job.seed);
        for (const PolicyRun& pr : job.result) {
          write_atomic(job.dir / "metrics" / pr.policy / seed_file(job.seed), metrics_csv(pr));
          write_atomic(job.dir / "series" / pr.policy / seed_file(job.seed), series_csv(pr));
        }
        std::lock_guard lock(mu);
        log << "seed " << job.seed << " done (" << job.dir.generic_string() << ")\n";
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(r.jobs, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct Stat {
  std::size_t runs = 0;
  std::vector<double> values;
};

std::optional<double> mean(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::optional<double> stdev(const std::vector<double>& v) {
  if (v.size() < 2) return std::nullopt;
  const double m = *mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// policy -> ordered metric stats, in first-seen order
using StatTable = std::vector<std::pair<std::string, std::vector<std::pair<std::string, Stat>>>>;

StatTable collect(const std::vector<const Job*>& jobs) {
  StatTable table;
  for (const Job* job : jobs)
    for (const PolicyRun& pr : job->result) {
      auto it = std::find_if(table.begin(), table.end(),
                             [&](const auto& e) { return e.first == pr.policy; });
      if (it == table.end()) {
        table.emplace_back(pr.policy, std::vector<std::pair<std::string, Stat>>{});
        it = table.end() - 1;
      }
      for (const auto& [k, v] : pr.metrics) {
        auto m = std::find_if(it->second.begin(), it->second.end(),
                              [&](const auto& e) { return e.first == k; });
        if (m == it->second.end()) {
          it->second.emplace_back(k, Stat{});
          m = it->second.end() - 1;
        }
        m->second.runs += 1;
        if (v) m->second.values.push_back(*v);
      }
    }
  return table;
}

std::uint64_t lemma_violations(const StatTable& table) {
  double total = 0.0;
  for (const auto& [policy, metrics] : table)
    for (const auto& [k, s] : metrics)
      if (k == "lemma_violations")
        for (double v : s.values) total += v;
  return static_cast<std::uint64_t>(total);
}

std::vector<std::string> list_files(const fs::path& root) {
  std::vector<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root).generic_string());
  std::sort(out.begin(), out.end());
  return out;
}

void write_manifest(const Resolved& r, std::string_view command) {
  Json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["preset"] = r.preset->name;
  m["policies"] = r.policies;
  m["seeds"] = r.seeds;
  Json ov = Json::object();
  for (const Param& p : r.params.entries()) ov[p.key] = p.value;
  m["overrides"] = ov;
  if (r.sweep) m["sweep"] = Json{{"param", r.sweep->param}, {"values", r.sweep->values}};
  m["config_hash"] = config_hash(r, command);
  std::vector<std::string> files;
  for (auto& f : list_files(r.out))
    if (f != "manifest.json") files.push_back(f);
  m["files"] = files;
  write_atomic(r.out / "manifest.json", m.dump(2) + "\n");
}

int report_invariant(std::uint64_t violations, std::ostream& log) {
  if (violations == 0) return kExitOk;
  log << "error: " << violations << " queue bound violations (Q_w > theta_w + mu_w) recorded\n";
  return kExitInvariant;
}

std::string sanitize(std::string_view name) {
  std::string out;
  for (char c : name)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c
                                                                                              : '_';
  return out.empty() ? "series" : out;
}

}  // namespace

// ---- parsing -------------------------------------------------------------

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    std::string item = trim(text.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  std::vector<std::uint64_t> out;
  for (const std::string& item : split_list(text)) {
    const std::size_t dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(parse_u64(item, "seed"));
      continue;
    }
    const std::uint64_t lo = parse_u64(trim(item.substr(0, dash)), "seed range");
    const std::uint64_t hi = parse_u64(trim(item.substr(dash + 1)), "seed range");
    if (hi < lo) throw ConfigError("seed range '" + item + "' is descending");
    if (hi - lo > 100000) throw ConfigError("seed range '" + item + "' is too long");
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  }
  if (out.empty()) throw ConfigError("empty seed list");
  std::set<std::uint64_t> seen;
  for (std::uint64_t s : out)
    if (!seen.insert(s).second) throw ConfigError("seed " + std::to_string(s) + " listed twice");
  return out;
}

std::pair<std::string, std::string> parse_override(std::string_view text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("override '" + std::string(text) + "' is not key=value");
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Invocation load_config(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path.string());
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  Invocation inv;
  for (const auto& [key, v] : j.items()) {
    if (key == "preset") {
      if (!v.is_string()) throw ConfigError("'preset' must be a string");
      inv.preset = v.get<std::string>();
    } else if (key == "policy" || key == "policies") {
      if (v.is_string()) {
        inv.policies = split_list(v.get<std::string>());
      } else if (v.is_array()) {
        for (const Json& p : v) {
          if (!p.is_string()) throw ConfigError("'" + key + "' entries must be strings");
          inv.policies.push_back(p.get<std::string>());
        }
      } else {
        throw ConfigError("'" + key + "' must be a string or an array");
      }
    } else if (key == "seeds") {
      inv.seeds = json_seeds(v);
    } else if (key == "seed") {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
        throw ConfigError("'seed' must be a non-negative integer");
      inv.base_seed = v.get<std::uint64_t>();
    } else if (key == "repeats") {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
        throw ConfigError("'repeats' must be a positive integer");
      inv.repeats = v.get<std::uint64_t>();
    } else if (key == "steps") {
      inv.overrides.emplace_back("steps", json_scalar(v, key));
    } else if (key == "overrides") {
      if (!v.is_object()) throw ConfigError("'overrides' must be an object");
      for (const auto& [k, val] : v.items()) inv.overrides.emplace_back(k, json_scalar(val, k));
    } else if (key == "out") {
      if (!v.is_string()) throw ConfigError("'out' must be a string");
      inv.out = v.get<std::string>();
    } else if (key == "jobs") {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
        throw ConfigError("'jobs' must be a non-negative integer");
      inv.jobs = v.get<unsigned>();
    } else if (key == "sweep") {
      if (!v.is_object() || !v.contains("param") || !v.contains("values") ||
          !v["param"].is_string() || !v["values"].is_array())
        throw ConfigError("'sweep' must be {\"param\": name, \"values\": [...]}");
      SweepSpec s;
      s.param = v["param"].get<std::string>();
      for (const Json& x : v["values"]) s.values.push_back(json_scalar(x, s.param));
      inv.sweep = std::move(s);
    } else if (key == "command" || key == "version" || key == "config_hash" || key == "files") {
      // written by manifests, carries no settings
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return inv;
}

Resolved resolve(const Invocation& inv) {
  if (inv.preset.empty()) throw ConfigError("no preset given (use --preset or a config file)");
  Resolved r;
  r.preset = &find_preset(inv.preset);
  r.params = r.preset->params;
  for (const auto& [k, v] : inv.overrides) r.params.set(k, v);
  r.policies = inv.policies.empty() ? r.preset->policies : inv.policies;
  for (const auto& id : r.policies)
    if (std::find(r.preset->policies.begin(), r.preset->policies.end(), id) ==
        r.preset->policies.end()) {
      std::string known;
      for (const auto& p : r.preset->policies) known += " " + p;
      throw ConfigError("unknown policy id '" + id + "' for preset " + r.preset->name +
                        " (known:" + known + ")");
    }
  std::set<std::string> seen(r.policies.begin(), r.policies.end());
  if (seen.size() != r.policies.size()) throw ConfigError("a policy is listed twice");
  if (!inv.seeds.empty()) {
    if (inv.repeats > 1) throw ConfigError("repeats combines with a single --seed, not a list");
    r.seeds = inv.seeds;
  } else {
    for (std::uint64_t k = 0; k < inv.repeats; ++k) r.seeds.push_back(inv.base_seed + k);
  }
  if (inv.sweep) {
    const Param& p = r.params.at(inv.sweep->param);
    if (p.kind != ParamKind::integer && p.kind != ParamKind::real)
      throw ConfigError("parameter '" + p.key + "' is not numeric and cannot be swept");
    if (inv.sweep->values.empty()) throw ConfigError("empty sweep value list");
    ParamSet probe = r.params;
    for (const auto& v : inv.sweep->values) probe.set(p.key, v);
    r.sweep = inv.sweep;
  }
  r.out = inv.out.empty() ? fs::path("runs") / r.preset->name : inv.out;
  r.jobs = inv.jobs != 0 ? inv.jobs : std::max(1u, std::thread::hardware_concurrency());
  return r;
}

std::string config_hash(const Resolved& r, std::string_view command) {
  std::ostringstream os;
  os << "command=" << command << "\npreset=" << r.preset->name << "\npolicies=";
  for (const auto& p : r.policies) os << p << ',';
  os << "\nseeds=";
  for (auto s : r.seeds) os << s << ',';
  os << '\n';
  for (const Param& p : r.params.entries()) os << p.key << '=' << p.value << '\n';
  if (r.sweep) {
    os << "sweep=" << r.sweep->param << ':';
    for (const auto& v : r.sweep->values) os << v << ',';
    os << '\n';
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(os.str())));
  return buf;
}

// ---- commands ------------------------------------------------------------

int run_command(const Invocation& inv, std::ostream& log) {
  const Resolved r = resolve(inv);
  if (r.sweep) throw ConfigError("the run command takes no sweep; use the sweep command");
  std::vector<Job> jobs;
  for (auto seed : r.seeds) jobs.push_back(Job{&r.params, seed, r.out, {}});
  run_jobs(r, jobs, log);

  std::vector<const Job*> all;
  for (const Job& j : jobs) all.push_back(&j);
  const StatTable table = collect(all);
  std::ostringstream os;
  CsvWriter w(os, {"policy", "metric", "runs", "defined", "mean", "sd", "min", "max"});
  for (const auto& [policy, metrics] : table)
    for (const auto& [k, s] : metrics) {
      const auto& v = s.values;
      w << policy << k << static_cast<std::uint64_t>(s.runs)
        << static_cast<std::uint64_t>(v.size()) << mean(v) << stdev(v)
        << (v.empty() ? std::optional<double>() : *std::min_element(v.begin(), v.end()))
        << (v.empty() ? std::optional<double>() : *std::max_element(v.begin(), v.end()));
      w.end_row();
    }
  write_atomic(r.out / "summary.csv", os.str());
  write_manifest(r, "run");
  log << "wrote " << (r.out / "summary.csv").generic_string() << " and manifest.json (hash "
      << config_hash(r, "run") << ")\n";
  return report_invariant(lemma_violations(table), log);
}

int sweep_command(const Invocation& inv, std::ostream& log) {
  if (!inv.sweep) throw ConfigError("sweep needs --param and --values");
  const Resolved r = resolve(inv);
  std::vector<ParamSet> params;
  for (const auto& v : r.sweep->values) {
    ParamSet p = r.params;
    p.set(r.sweep->param, v);
    params.push_back(std::move(p));
  }
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < params.size(); ++i)
    for (auto seed : r.seeds)
      jobs.push_back(Job{&params[i], seed,
                         r.out / "runs" / (r.sweep->param + "=" + sanitize(r.sweep->values[i])),
                         {}});
  run_jobs(r, jobs, log);

  std::ostringstream os;
  CsvWriter w(os, {"param", "value", "policy", "seeds", "welfare", "fairness_hon", "quality",
                   "waiting_time", "mean_backlog"});
  std::ostringstream ss;
  CsvWriter sw(ss, {"figure", "series", "x", "y"});
  std::uint64_t violations = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    std::vector<const Job*> group;
    for (const Job& j : jobs)
      if (j.params == &params[i]) group.push_back(&j);
    const StatTable table = collect(group);
    violations += lemma_violations(table);
    const double x = params[i].real(r.sweep->param);
    for (const auto& [policy, metrics] : table) {
      auto m = [&](std::string_view name) -> std::optional<double> {
        for (const auto& [k, s] : metrics)
          if (k == name) return mean(s.values);
        return std::nullopt;
      };
      w << r.sweep->param << r.sweep->values[i] << policy
        << static_cast<std::uint64_t>(r.seeds.size()) << m("welfare") << m("fairness_hon")
        << m("quality") << m("waiting_time") << m("mean_backlog");
      w.end_row();
      if (auto v = m("welfare")) {
        sw << "f57-welfare" << policy << x << *v;
        sw.end_row();
      }
      if (auto v = m("mean_backlog")) {
        sw << "f57-backlog" << policy << x << *v;
        sw.end_row();
      }
    }
  }
  write_atomic(r.out / "sweep.csv", os.str());
  write_atomic(r.out / "series" / "sweep.csv", ss.str());
  write_manifest(r, "sweep");
  log << "wrote " << (r.out / "sweep.csv").generic_string() << " (" << params.size()
      << " values, hash " << config_hash(r, "sweep") << ")\n";
  return report_invariant(violations, log);
}

int plot_data_command(std::string_view figure, const std::vector<fs::path>& inputs,
                      const fs::path& out, std::ostream& log) {
  const FigureInfo* info = find_figure(figure);
  if (!info) {
    log << "error: unknown figure id '" << figure << "'; known:";
    for (const auto& f : figure_registry()) log << ' ' << f.id;
    log << '\n';
    return kExitConfig;
  }
  if (inputs.empty()) {
    log << "error: no input run directories given\n";
    return kExitConfig;
  }
  std::vector<std::string> absent;
  for (const auto& in : inputs)
    if (!fs::is_directory(in / "series")) absent.push_back((in / "series").generic_string());
  if (!absent.empty()) {
    log << "error: missing run outputs:\n";
    for (const auto& a : absent) log << "  " << a << '\n';
    return kExitConfig;
  }

  struct Acc {
    double sum = 0.0;
    std::uint64_t n = 0;
  };
  std::map<std::string, std::map<double, Acc>> series;
  std::map<std::string, std::set<std::string>> sources;
  for (const auto& in : inputs) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(in / "series"))
      if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      std::ifstream f(file);
      std::string line;
      std::getline(f, line);
      while (std::getline(f, line)) {
        const auto cells = split_list(line);
        if (cells.size() != 4 || cells[0] != figure) continue;
        double x = 0.0;
        double y = 0.0;
        if (std::from_chars(cells[2].data(), cells[2].data() + cells[2].size(), x).ec !=
                std::errc{} ||
            std::from_chars(cells[3].data(), cells[3].data() + cells[3].size(), y).ec !=
                std::errc{})
          continue;
        Acc& a = series[cells[1]][x];
        a.sum += y;
        a.n += 1;
        sources[cells[1]].insert(file.generic_string());
      }
    }
  }
  if (series.empty()) {
    log << "error: missing runs for figure " << figure << " (expected preset " << info->preset
        << ") under:\n";
    for (const auto& in : inputs) log << "  " << in.generic_string() << '\n';
    return kExitConfig;
  }

  const fs::path dir = out / std::string(figure);
  Json legend;
  legend["figure"] = figure;
  legend["x"] = info->x_label;
  legend["y"] = info->y_label;
  legend["series"] = Json::array();
  for (const auto& [name, points] : series) {
    std::ostringstream os;
    CsvWriter w(os, {"x", "y"});
    for (const auto& [x, a] : points) {
      w << x << a.sum / static_cast<double>(a.n);
      w.end_row();
    }
    const std::string file = sanitize(name) + ".csv";
    write_atomic(dir / file, os.str());
    legend["series"].push_back(
        Json{{"name", name}, {"file", file}, {"sources", sources[name].size()}});
  }
  write_atomic(dir / "legend.json", legend.dump(2) + "\n");
  log << "wrote " << series.size() << " series to " << dir.generic_string() << '\n';
  return kExitOk;
}

void list_presets(std::ostream& out, bool verbose) {
  for (const Preset& p : preset_registry()) {
    out << p.name << "  " << p.summary << "\n  policies:";
    for (const auto& id : p.policies) out << ' ' << id;
    out << "\n  figures:";
    for (const auto& id : p.figures) out << ' ' << id;
    out << '\n';
    if (!verbose) continue;
    for (const Param& prm : p.params.entries()) {
      out << "    " << prm.key << " (" << to_string(prm.kind) << ") = " << prm.value << "  "
          << prm.help;
      if (!prm.choices.empty()) {
        out << " [";
        for (std::size_t i = 0; i < prm.choices.size(); ++i)
          out << (i ? "|" : "") << prm.choices[i];
        out << ']';
      }
      out << '\n';
    }
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"trustsim: seeded trust and reputation experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string config;
  std::string preset;
  std::uint64_t seed = 0;
  std::uint64_t repeats = 0;
  std::string seeds;
  std::string out;
  std::vector<std::string> policies;
  std::vector<std::string> overrides;
  std::int64_t steps = -1;
  unsigned jobs = 0;

  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON config or manifest of an earlier run");
    sub->add_option("--preset", preset, "scenario preset name");
    sub->add_option("--seed", seed, "base seed");
    sub->add_option("--repeats", repeats, "runs from the base seed upward");
    sub->add_option("--seeds", seeds, "seed list, e.g. 1,2,5-8");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--policy", policies, "policy id (repeatable, or comma separated)")
        ->delimiter(',');
    sub->add_option("--override", overrides, "key=value parameter override (repeatable)");
    sub->add_option("--steps", steps, "horizon in steps");
    sub->add_option("--jobs", jobs, "worker threads (default: all cores)");
  };

  CLI::App* run = app.add_subcommand("run", "run a preset for one or more seeds");
  add_run_flags(run);
  CLI::App* sweep = app.add_subcommand("sweep", "run a preset for each value of one parameter");
  add_run_flags(sweep);
  std::string param;
  std::string values;
  bool values_given = false;
  sweep->add_option("--param", param, "numeric parameter to sweep");
  sweep->add_option("--values", values, "comma separated values")
      ->each([&](const std::string&) { values_given = true; });

  CLI::App* plot = app.add_subcommand("plot-data", "average per-seed series into plot files");
  std::string figure;
  std::vector<std::string> inputs;
  std::string plot_out = "plots";
  plot->add_option("--figure", figure, "figure id")->required();
  plot->add_option("--in", inputs, "run directory (repeatable)")->required();
  plot->add_option("--out", plot_out, "output directory");

  CLI::App* list = app.add_subcommand("list-presets", "show presets, policies and parameters");
  bool verbose = false;
  list->add_flag("-v,--verbose", verbose, "list every parameter with its default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  auto invocation = [&](CLI::App* sub) {
    Invocation inv = config.empty() ? Invocation{} : load_config(config);
    if (!preset.empty()) inv.preset = preset;
    if (!policies.empty()) inv.policies = policies;
    if (!sub->get_option("--seed")->empty()) inv.base_seed = seed;
    if (!sub->get_option("--repeats")->empty()) {
      if (repeats == 0) throw ConfigError("--repeats must be positive");
      inv.repeats = repeats;
    }
    if (!seeds.empty()) inv.seeds = parse_seeds(seeds);
    else if (!sub->get_option("--seed")->empty()) inv.seeds.clear();
    for (const auto& o : overrides) inv.overrides.push_back(parse_override(o));
    if (steps >= 0) inv.overrides.emplace_back("steps", std::to_string(steps));
    if (!out.empty()) inv.out = out;
    if (jobs != 0) inv.jobs = jobs;
    return inv;
  };

  try {
    if (*list) {
      list_presets(std::cout, verbose);
      return kExitOk;
    }
    if (*plot) {
      std::vector<fs::path> in(inputs.begin(), inputs.end());
      return plot_data_command(figure, in, plot_out, std::cerr);
    }
    if (*run) return run_command(invocation(run), std::cerr);
    Invocation inv = invocation(sweep);
    if (!param.empty() || values_given) {
      if (param.empty()) throw ConfigError("--values needs --param");
      inv.sweep = SweepSpec{param, split_list(values)};
    }
    return sweep_command(inv, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const ContractViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace trustsim::cli
