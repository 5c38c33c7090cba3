#include "fzk/io.hpp"

#include <openssl/evp.h>

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <set>
#include <sstream>

#include "fzk/errors.hpp"
#include "json.hpp"

namespace fzk {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && first != last;
}

double parse_real(const std::string& key, std::string_view text) {
  double v = 0.0;
  if (!parse_number(text, v) || !std::isfinite(v)) {
    throw ValidationError(key, "expected a finite number, got '" + std::string(text) + "'");
  }
  return v;
}

long long parse_integer(const std::string& key, std::string_view text) {
  long long v = 0;
  if (!parse_number(text, v)) throw ValidationError(key, "expected an integer, got '" + std::string(text) + "'");
  return v;
}

InitialTerm parse_initial_term(std::string_view text) {
  const auto tokens = split_ws(text);
  if (tokens.empty()) throw ValidationError("ic", "empty initial-condition descriptor");
  const std::string_view kind = tokens.front();

  std::vector<std::pair<std::string, std::string_view>> params;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("ic", "expected name=value, got '" + std::string(tokens[i]) + "'");
    }
    params.emplace_back(std::string(tokens[i].substr(0, eq)), tokens[i].substr(eq + 1));
  }
  auto unknown = [&](const std::string& name) {
    return ValidationError("ic", "unknown parameter '" + name + "' for " + std::string(kind));
  };

  if (kind == "soliton") {
    SolitonSpec s;
    for (const auto& [name, value] : params) {
      if (name == "c") s.c = parse_real("ic", value);
      else if (name == "theta") s.theta = parse_real("ic", value);
      else if (name == "x0") s.x0 = parse_real("ic", value);
      else if (name == "y0") s.y0 = parse_real("ic", value);
      else throw unknown(name);
    }
    if (!(s.c > 0.0)) throw ValidationError("ic", "soliton speed c must be positive");
    return s;
  }
  if (kind == "cosine") {
    CosineMode c;
    for (const auto& [name, value] : params) {
      if (name == "amp") c.amp = parse_real("ic", value);
      else if (name == "k1") c.k1 = static_cast<int>(parse_integer("ic", value));
      else if (name == "k2") c.k2 = static_cast<int>(parse_integer("ic", value));
      else if (name == "phase") c.phase = parse_real("ic", value);
      else throw unknown(name);
    }
    return c;
  }
  if (kind == "constant") {
    ConstantField c;
    for (const auto& [name, value] : params) {
      if (name == "value") c.value = parse_real("ic", value);
      else throw unknown(name);
    }
    return c;
  }
  if (kind == "random") {
    RandomField r;
    for (const auto& [name, value] : params) {
      if (name == "amp") r.amp = parse_real("ic", value);
      else throw unknown(name);
    }
    return r;
  }
  if (kind == "zero") {
    if (!params.empty()) throw unknown(params.front().first);
    return ConstantField{0.0};
  }
  throw ValidationError("ic", "unknown initial-condition kind '" + std::string(kind) + "'");
}

std::string describe(const InitialTerm& term) {
  std::ostringstream os;
  if (const auto* s = std::get_if<SolitonSpec>(&term)) {
    os << "soliton c=" << format_double(s->c) << " theta=" << format_double(s->theta)
       << " x0=" << format_double(s->x0) << " y0=" << format_double(s->y0);
  } else if (const auto* c = std::get_if<CosineMode>(&term)) {
    os << "cosine amp=" << format_double(c->amp) << " k1=" << c->k1 << " k2=" << c->k2
       << " phase=" << format_double(c->phase);
  } else if (const auto* k = std::get_if<ConstantField>(&term)) {
    os << "constant value=" << format_double(k->value);
  } else if (const auto* r = std::get_if<RandomField>(&term)) {
    os << "random amp=" << format_double(r->amp);
  }
  return os.str();
}

// Little-endian primitives, independent of host byte order.
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}

double get_f64(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in[at + i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading " + path.string());
  return data;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  cfg.ic.clear();
  std::set<std::string> seen;
  bool have_n = false;
  bool have_t = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "missing key");
    if (value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");

    if (key != "ic" && !seen.insert(key).second) throw ParseError(line_no, "duplicate key '" + key + "'");

    if (key == "n") {
      const long long n = parse_integer(key, value);
      if (n < 1 || n > 1 << 16) throw ValidationError(key, "mode cutoff must be >= 1");
      cfg.n = static_cast<int>(n);
      have_n = true;
    } else if (key == "l") {
      cfg.l = parse_real(key, value);
      if (!(cfg.l > 0.0)) throw ValidationError(key, "domain factor must be positive");
    } else if (key == "alpha") {
      cfg.alpha = parse_real(key, value);
      if (!(cfg.alpha > 0.0 && cfg.alpha <= 2.0)) throw ValidationError(key, "must lie in (0, 2]");
    } else if (key == "dt") {
      if (value == "auto") {
        cfg.dt.reset();
      } else {
        cfg.dt = parse_real(key, value);
        if (!(*cfg.dt > 0.0)) throw ValidationError(key, "time step must be positive or 'auto'");
      }
    } else if (key == "t_final") {
      cfg.t_final = parse_real(key, value);
      if (!(cfg.t_final >= 0.0)) throw ValidationError(key, "final time must be non-negative");
      have_t = true;
    } else if (key == "ic") {
      cfg.ic.push_back(parse_initial_term(value));
    } else if (key == "observe_every") {
      const long long k = parse_integer(key, value);
      if (k < 1) throw ValidationError(key, "cadence must be >= 1");
      cfg.observe_every = static_cast<std::size_t>(k);
    } else if (key == "out_dir") {
      cfg.out_dir = std::string(value);
    } else if (key == "seed") {
      std::uint64_t s = 0;
      if (!parse_number(value, s)) throw ValidationError(key, "expected a non-negative integer");
      cfg.seed = s;
    } else {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
  }

  if (!have_n) throw ValidationError("n", "missing");
  if (!have_t) throw ValidationError("t_final", "missing");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

std::string format_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "n = " << cfg.n << '\n'
     << "l = " << format_double(cfg.l) << '\n'
     << "alpha = " << format_double(cfg.alpha) << '\n'
     << "dt = " << (cfg.dt ? format_double(*cfg.dt) : std::string("auto")) << '\n'
     << "t_final = " << format_double(cfg.t_final) << '\n';
  for (const InitialTerm& term : cfg.ic) os << "ic = " << describe(term) << '\n';
  os << "observe_every = " << cfg.observe_every << '\n'
     << "out_dir = " << cfg.out_dir << '\n'
     << "seed = " << cfg.seed << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Snapshots

std::vector<std::uint8_t> encode_snapshot(const RealField& field, const SnapshotMeta& meta) {
  std::vector<std::uint8_t> out;
  const std::size_t count = field.values().size();
  out.reserve(kSnapshotHeaderBytes + 8 * count);
  out.insert(out.end(), kSnapshotMagic.begin(), kSnapshotMagic.end());
  put_u32(out, meta.n);
  put_u32(out, static_cast<std::uint32_t>(field.m()));
  put_f64(out, field.l());
  put_f64(out, meta.alpha);
  put_f64(out, meta.t);
  for (double v : field.values()) put_f64(out, v);
  return out;
}

std::pair<RealField, SnapshotMeta> decode_snapshot(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kSnapshotHeaderBytes) throw CorruptFile("snapshot shorter than its header");
  if (!std::equal(kSnapshotMagic.begin(), kSnapshotMagic.end(), bytes.begin())) {
    throw CorruptFile("snapshot magic mismatch");
  }
  SnapshotMeta meta;
  meta.n = get_u32(bytes, 8);
  const std::uint32_t m = get_u32(bytes, 12);
  const double l = get_f64(bytes, 16);
  meta.alpha = get_f64(bytes, 24);
  meta.t = get_f64(bytes, 32);

  const std::uint64_t count = static_cast<std::uint64_t>(m) * m;
  if (m == 0 || bytes.size() != kSnapshotHeaderBytes + 8 * count) {
    throw CorruptFile("snapshot payload length does not match M = " + std::to_string(m));
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = get_f64(bytes, kSnapshotHeaderBytes + 8 * i);
  return {RealField(static_cast<int>(m), l, std::move(values)), meta};
}

void write_snapshot(const std::filesystem::path& path, const RealField& field, const SnapshotMeta& meta) {
  const auto bytes = encode_snapshot(field, meta);
  write_file_atomic(path, std::span<const std::uint8_t>(bytes));
}

std::pair<RealField, SnapshotMeta> read_snapshot(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  return decode_snapshot(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

// ---------------------------------------------------------------------------
// CSV

std::string format_double(double v) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

std::string error_table_csv(const ErrorTable& table) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  std::ostringstream os;
  os << "n,l2_error,l2_order,linf_error,linf_order\n";
  for (const ErrorRow& r : table.rows) {
    os << r.n << ',' << format_double(r.l2_error) << ',' << opt(r.l2_order) << ','
       << format_double(r.linf_error) << ',' << opt(r.linf_order) << '\n';
  }
  return os.str();
}

std::string invariants_csv(std::span<const InvariantRecord> series) {
  std::ostringstream os;
  os << "t,mass,momentum,hamiltonian\n";
  for (const InvariantRecord& r : series) {
    os << format_double(r.t) << ',' << format_double(r.mass) << ',' << format_double(r.momentum) << ','
       << format_double(r.hamiltonian) << '\n';
  }
  return os.str();
}

std::string temporal_order_csv(std::span<const TemporalOrderRow> rows) {
  std::ostringstream os;
  os << "dt,error,order\n";
  for (const TemporalOrderRow& r : rows) {
    os << format_double(r.dt) << ',' << format_double(r.error) << ','
       << (r.order ? format_double(*r.order) : std::string()) << '\n';
  }
  return os.str();
}

void write_error_table(const std::filesystem::path& path, const ErrorTable& table) {
  write_file_atomic(path, error_table_csv(table));
}

void write_invariants(const std::filesystem::path& path, std::span<const InvariantRecord> series) {
  write_file_atomic(path, invariants_csv(series));
}

// ---------------------------------------------------------------------------
// Files

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(contents.data()), contents.size()));
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(contents.data()), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " to " + path.string());
  }
}

std::string sha256_file(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw IoError("SHA-256 failed for " + path.string());
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xf]);
  }
  return hex;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  using nlohmann::json;
  const RunConfig& c = manifest.config;

  json config = {{"n", c.n},
                 {"l", c.l},
                 {"alpha", c.alpha},
                 {"dt", c.dt ? json(*c.dt) : json("auto")},
                 {"t_final", c.t_final},
                 {"observe_every", c.observe_every},
                 {"out_dir", c.out_dir},
                 {"seed", c.seed}};
  json ic = json::array();
  for (const InitialTerm& term : c.ic) ic.push_back(describe(term));
  config["ic"] = ic;

  json doc = {{"artifact_version", std::string(kArtifactVersion)},
              {"command", manifest.command},
              {"config", config},
              {"timings_seconds", manifest.timings}};
  if (manifest.drift) {
    doc["drift"] = {{"mass", manifest.drift->mass},
                    {"momentum", manifest.drift->momentum},
                    {"hamiltonian", manifest.drift->hamiltonian}};
  }
  json files = json::array();
  const auto base = path.parent_path();
  for (const auto& rel : manifest.files) {
    files.push_back({{"path", rel.generic_string()}, {"sha256", sha256_file(base / rel)}});
  }
  doc["files"] = files;
  write_file_atomic(path, doc.dump(2) + "\n");
}

}  // namespace fzk
