#include "signrec/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace signrec {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ValidationError("config key '" + key + "' needs a finite number, got '" + value + "'");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) {
    throw ValidationError("config key '" + key + "' needs an integer, got '" + value + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (value.empty() || value[0] == '-' || end != value.c_str() + value.size() || errno == ERANGE) {
    throw ValidationError("config key '" + key + "' needs an unsigned integer, got '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ValidationError("config key '" + key + "' needs true or false, got '" + value + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  if (trim(value).empty()) return out;
  std::stringstream ss(value);
  std::string part;
  while (std::getline(ss, part, ',')) {
    out.push_back(static_cast<int>(parse_int(key, trim(part))));
  }
  return out;
}

char parse_delimiter(const std::string& value) {
  if (value == "tab") return '\t';
  if (value == "comma") return ',';
  if (value == "space") return ' ';
  if (value == "semicolon") return ';';
  throw ValidationError("delimiter must be tab, comma, space or semicolon, got '" + value + "'");
}

const char* delimiter_name(char d) {
  switch (d) {
    case '\t': return "tab";
    case ',': return "comma";
    case ' ': return "space";
    case ';': return "semicolon";
    default: throw ValidationError("delimiter character is not representable in a config file");
  }
}

void apply(AppConfig& cfg, const std::string& key, const std::string& value) {
  TrainConfig& t = cfg.train;
  if (key == "delimiter") cfg.delimiter = parse_delimiter(value);
  else if (key == "min_user_interactions") cfg.min_user_interactions = static_cast<int>(parse_int(key, value));
  else if (key == "min_item_interactions") cfg.min_item_interactions = static_cast<int>(parse_int(key, value));
  else if (key == "split_ratio") cfg.split_ratio = parse_double(key, value);
  else if (key == "num_folds") cfg.num_folds = static_cast<int>(parse_int(key, value));
  else if (key == "eval_ks") cfg.eval_ks = parse_int_list(key, value);
  else if (key == "filter_k") cfg.filter_k = static_cast<int>(parse_int(key, value));
  else if (key == "dim") t.dim = static_cast<Index>(parse_int(key, value));
  else if (key == "num_layers") t.num_layers = static_cast<int>(parse_int(key, value));
  else if (key == "lr") t.lr = parse_double(key, value);
  else if (key == "batch_size") t.batch_size = static_cast<int>(parse_int(key, value));
  else if (key == "epochs") t.epochs = static_cast<int>(parse_int(key, value));
  else if (key == "lambda") t.lambda = parse_double(key, value);
  else if (key == "c1") t.c1 = parse_double(key, value);
  else if (key == "c2") t.c2 = parse_double(key, value);
  else if (key == "delta") t.delta = parse_double(key, value);
  else if (key == "negatives_per_obs") t.negatives_per_obs = static_cast<int>(parse_int(key, value));
  else if (key == "lr_milestones") t.lr_milestones = parse_int_list(key, value);
  else if (key == "lr_gamma") t.lr_gamma = parse_double(key, value);
  else if (key == "seed") t.seed = parse_u64(key, value);
  else if (key == "enable_bpr_neg") t.enable_bpr_neg = parse_bool(key, value);
  else if (key == "enable_mse") t.enable_mse = parse_bool(key, value);
  else if (key == "enable_ortho") t.enable_ortho = parse_bool(key, value);
  else if (key == "enable_filter") t.enable_filter = parse_bool(key, value);
  else if (key == "precision") {
    if (value == "single") t.precision = Precision::single_prec;
    else if (value == "double") t.precision = Precision::double_prec;
    else throw ValidationError("precision must be single or double, got '" + value + "'");
  }
  else if (key == "eval_every") t.eval_every = static_cast<int>(parse_int(key, value));
  else if (key == "eval_k") t.eval_k = static_cast<int>(parse_int(key, value));
  else if (key == "threads") t.threads = static_cast<int>(parse_int(key, value));
  else throw ValidationError("unknown config key '" + key + "'");
}

}  // namespace

void AppConfig::validate() const {
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
    throw ValidationError("split_ratio must lie strictly between 0 and 1");
  }
  if (num_folds < 1) throw ValidationError("num_folds must be >= 1");
  if (min_user_interactions < 0 || min_item_interactions < 0) {
    throw ValidationError("interaction minimums cannot be negative");
  }
  if (eval_ks.empty()) throw ValidationError("eval_ks needs at least one cutoff");
  for (const int k : eval_ks) {
    if (k < 1) throw ValidationError("every eval cutoff must be >= 1");
  }
  if (filter_k < 0) throw ValidationError("filter_k cannot be negative");
  train.validate();
}

AppConfig parse_config(std::istream& in) {
  AppConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + " is not 'key = value'");
    }
    apply(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return cfg;
}

AppConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in);
}

namespace {

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

void write_config(std::ostream& out, const AppConfig& cfg) {
  const TrainConfig& t = cfg.train;
  char num[64];
  const auto put_d = [&](const char* key, double v) {
    std::snprintf(num, sizeof(num), "%.17g", v);
    out << key << " = " << num << '\n';
  };
  out << "delimiter = " << delimiter_name(cfg.delimiter) << '\n';
  out << "min_user_interactions = " << cfg.min_user_interactions << '\n';
  out << "min_item_interactions = " << cfg.min_item_interactions << '\n';
  put_d("split_ratio", cfg.split_ratio);
  out << "num_folds = " << cfg.num_folds << '\n';
  out << "eval_ks = " << join_ints(cfg.eval_ks) << '\n';
  out << "filter_k = " << cfg.filter_k << '\n';
  out << "dim = " << t.dim << '\n';
  out << "num_layers = " << t.num_layers << '\n';
  put_d("lr", t.lr);
  out << "batch_size = " << t.batch_size << '\n';
  out << "epochs = " << t.epochs << '\n';
  put_d("lambda", t.lambda);
  put_d("c1", t.c1);
  put_d("c2", t.c2);
  put_d("delta", t.delta);
  out << "negatives_per_obs = " << t.negatives_per_obs << '\n';
  out << "lr_milestones = " << join_ints(t.lr_milestones) << '\n';
  put_d("lr_gamma", t.lr_gamma);
  out << "seed = " << t.seed << '\n';
  out << "enable_bpr_neg = " << (t.enable_bpr_neg ? "true" : "false") << '\n';
  out << "enable_mse = " << (t.enable_mse ? "true" : "false") << '\n';
  out << "enable_ortho = " << (t.enable_ortho ? "true" : "false") << '\n';
  out << "enable_filter = " << (t.enable_filter ? "true" : "false") << '\n';
  out << "precision = " << (t.precision == Precision::single_prec ? "single" : "double") << '\n';
  out << "eval_every = " << t.eval_every << '\n';
  out << "eval_k = " << t.eval_k << '\n';
  out << "threads = " << t.threads << '\n';
}

}  // namespace signrec
