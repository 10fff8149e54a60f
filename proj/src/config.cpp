#include "lvfp/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "lvfp/csv.hpp"
#include "lvfp/errors.hpp"

namespace lvfp {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty())
            out.push_back(cur);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v)
{
    const std::string t = trim(v);
    double out = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ConfigError("config key '" + key + "': cannot parse number '" + v + "'");
    return out;
}

long to_long(const std::string& key, const std::string& v)
{
    const std::string t = trim(v);
    long out = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ConfigError("config key '" + key + "': cannot parse integer '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v)
{
    const std::string t = trim(v);
    if (t == "true" || t == "1" || t == "yes")
        return true;
    if (t == "false" || t == "0" || t == "no")
        return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    for (const auto& item : split(v, ','))
        out.push_back(to_double(key, item));
    return out;
}

std::string list_str(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + format_double(v[i]);
    return s;
}

struct Entry {
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

// Numeric field addressed through an accessor; the getter only reads.
Entry number(double* (*field)(RunConfig&))
{
    return {[field](RunConfig& c, const std::string& k, const std::string& v) { *field(c) = to_double(k, v); },
            [field](const RunConfig& c) { return format_double(*field(const_cast<RunConfig&>(c))); }};
}

#define LVFP_NUM(expr)                                                                             \
    number([](RunConfig& c) -> double* { return &(expr); })

const std::map<std::string, Entry>& table()
{
    static const std::map<std::string, Entry> t = {
        {"model.alpha", LVFP_NUM(c.model.alpha)},
        {"model.beta", LVFP_NUM(c.model.beta)},
        {"model.gamma", LVFP_NUM(c.model.gamma)},
        {"model.K", LVFP_NUM(c.model.K)},
        {"model.sigma1", LVFP_NUM(c.model.sigma1)},
        {"model.sigma2", LVFP_NUM(c.model.sigma2)},
        {"model.chi", LVFP_NUM(c.model.chi)},
        {"model.theta", LVFP_NUM(c.model.theta)},
        {"model.nu", LVFP_NUM(c.model.nu)},
        {"model.mu", LVFP_NUM(c.model.mu)},
        {"model.p", LVFP_NUM(c.model.p)},
        {"grid.L", LVFP_NUM(c.solver.grid.L)},
        {"grid.n",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              c.solver.grid.n = static_cast<int>(to_long(k, v));
          },
          [](const RunConfig& c) { return std::to_string(c.solver.grid.n); }}},
        {"solver.dt", LVFP_NUM(c.solver.dt)},
        {"solver.t_end", LVFP_NUM(c.solver.t_end)},
        {"solver.output_stride",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              c.solver.output_stride = static_cast<int>(to_long(k, v));
          },
          [](const RunConfig& c) { return std::to_string(c.solver.output_stride); }}},
        {"solver.coupling",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              const std::string t = trim(v);
              if (t == "self-consistent")
                  c.solver.coupling = Coupling::self_consistent;
              else if (t == "prescribed-ode")
                  c.solver.coupling = Coupling::prescribed_ode;
              else
                  throw ConfigError("config key '" + k + "': expected self-consistent or prescribed-ode");
          },
          [](const RunConfig& c) {
              return std::string(c.solver.coupling == Coupling::self_consistent ? "self-consistent"
                                                                                : "prescribed-ode");
          }}},
        {"solver.flux",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              const std::string t = trim(v);
              if (t == "moment-fitted")
                  c.solver.flux = FluxScheme::moment_fitted;
              else if (t == "chang-cooper")
                  c.solver.flux = FluxScheme::chang_cooper;
              else
                  throw ConfigError("config key '" + k + "': expected moment-fitted or chang-cooper");
          },
          [](const RunConfig& c) {
              return std::string(c.solver.flux == FluxScheme::moment_fitted ? "moment-fitted" : "chang-cooper");
          }}},
        {"solver.time",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              const std::string t = trim(v);
              if (t == "fitted-midpoint")
                  c.solver.time = TimeScheme::fitted_midpoint;
              else if (t == "euler")
                  c.solver.time = TimeScheme::euler;
              else
                  throw ConfigError("config key '" + k + "': expected fitted-midpoint or euler");
          },
          [](const RunConfig& c) {
              return std::string(c.solver.time == TimeScheme::fitted_midpoint ? "fitted-midpoint" : "euler");
          }}},
        {"moments.dt", LVFP_NUM(c.moments_dt)},
        {"moments.t_end", LVFP_NUM(c.moments_t_end)},
        {"moments.output_interval", LVFP_NUM(c.moments_output_interval)},
        {"moments.initial",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              c.moments_initial.clear();
              for (const auto& pair : split(v, ';')) {
                  std::istringstream is(pair);
                  std::string a, b, extra;
                  if (!(is >> a >> b) || (is >> extra))
                      throw ConfigError("config key '" + k + "': expected 'm1 m2; m1 m2; ...'");
                  c.moments_initial.push_back({to_double(k, a), to_double(k, b)});
              }
          },
          [](const RunConfig& c) {
              std::string s;
              for (std::size_t i = 0; i < c.moments_initial.size(); ++i)
                  s += (i ? "; " : "") + format_double(c.moments_initial[i][0]) + " " +
                       format_double(c.moments_initial[i][1]);
              return s;
          }}},
        {"moments.v0",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              const auto l = to_list(k, v);
              if (l.size() != 2)
                  throw ConfigError("config key '" + k + "': expected two values 'v1, v2'");
              c.moments_v0 = {l[0], l[1]};
          },
          [](const RunConfig& c) { return list_str({c.moments_v0[0], c.moments_v0[1]}); }}},
        {"simulate.m0",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              const auto l = to_list(k, v);
              if (l.size() != 2)
                  throw ConfigError("config key '" + k + "': expected two values 'm1, m2'");
              c.initial_means = {l[0], l[1]};
          },
          [](const RunConfig& c) { return list_str({c.initial_means[0], c.initial_means[1]}); }}},
        {"simulate.snapshot_times",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.snapshot_times = to_list(k, v); },
          [](const RunConfig& c) { return list_str(c.snapshot_times); }}},
        {"simulate.quasi_snapshots",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.quasi_snapshots = to_bool(k, v); },
          [](const RunConfig& c) { return std::string(c.quasi_snapshots ? "true" : "false"); }}},
        {"metrics.requests",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              c.metrics.clear();
              for (const auto& item : split(v, ',')) {
                  const auto colon = item.find(':');
                  MetricRequest r;
                  try {
                      r.kind = distance_kind_from_string(trim(item.substr(0, colon)));
                  } catch (const std::domain_error& e) {
                      throw ConfigError("config key '" + k + "': " + e.what());
                  }
                  r.order = colon == std::string::npos ? 1.0 : to_double(k, item.substr(colon + 1));
                  c.metrics.push_back(r);
              }
          },
          [](const RunConfig& c) {
              std::string s;
              for (std::size_t i = 0; i < c.metrics.size(); ++i)
                  s += (i ? ", " : "") + to_string(c.metrics[i].kind) + ":" + format_double(c.metrics[i].order);
              return s;
          }}},
        {"metrics.xi_min", LVFP_NUM(c.xi_min)},
        {"metrics.xi_max", LVFP_NUM(c.xi_max)},
        {"metrics.nodes",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.xi_nodes = static_cast<int>(to_long(k, v)); },
          [](const RunConfig& c) { return std::to_string(c.xi_nodes); }}},
        {"output.dir",
         {[](RunConfig& c, const std::string&, const std::string& v) { c.outdir = trim(v); },
          [](const RunConfig& c) { return c.outdir; }}},
        {"output.tag",
         {[](RunConfig& c, const std::string&, const std::string& v) { c.tag = trim(v); },
          [](const RunConfig& c) { return c.tag; }}},
        {"run.seed",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              c.seed = static_cast<std::uint64_t>(to_long(k, v));
          },
          [](const RunConfig& c) { return std::to_string(c.seed); }}},
        {"sweep.param",
         {[](RunConfig& c, const std::string&, const std::string& v) { c.sweep_param = trim(v); },
          [](const RunConfig& c) { return c.sweep_param; }}},
        {"sweep.values",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.sweep_values = to_list(k, v); },
          [](const RunConfig& c) { return list_str(c.sweep_values); }}},
    };
    return t;
}

#undef LVFP_NUM

}  // namespace

void RunConfig::validate() const
{
    model.validate();
    solver.validate();
    if (!(moments_dt > 0) || !(moments_t_end >= 0) || !(moments_output_interval > 0))
        throw std::domain_error("moments: dt and output_interval must be positive, t_end nonnegative");
    if (!(xi_min > 0) || !(xi_max > xi_min) || xi_nodes < 2)
        throw std::domain_error("metrics: need 0 < xi_min < xi_max and nodes >= 2");
    if (tag.empty() || tag.find('/') != std::string::npos)
        throw std::domain_error("output.tag must be non-empty and contain no '/'");
    if (table().find(sweep_param) == table().end())
        throw std::domain_error("sweep.param '" + sweep_param + "' is not a config key");
}

std::map<std::string, std::string> parse_config_text(const std::string& text)
{
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (table().find(key) == table().end())
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::map<std::string, std::string> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value)
{
    const auto it = table().find(key);
    if (it == table().end())
        throw ConfigError("unknown config key '" + key + "'");
    it->second.set(cfg, key, value);
}

void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& kv)
{
    for (const auto& [k, v] : kv)
        apply_setting(cfg, k, v);
}

std::string dump_config(const RunConfig& cfg)
{
    std::string out;
    for (const auto& [k, e] : table())
        out += k + " = " + e.get(cfg) + "\n";
    return out;
}

std::vector<std::string> known_config_keys()
{
    std::vector<std::string> keys;
    for (const auto& kv : table())
        keys.push_back(kv.first);
    return keys;
}

}  // namespace lvfp
