// Copyright 2026 The Mirrorplay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mirrorplay/cli/config.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace mirrorplay::cli {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config field '" + path + "': " + what);
}

void check_keys(const Json& j, const std::string& path,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      std::string list;
      for (const std::string& k : allowed) list += (list.empty() ? "" : ", ") + k;
      fail(path.empty() ? it.key() : path + "." + it.key(),
           "unknown key (allowed: " + list + ")");
    }
  }
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::uint64_t unsigned64(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() &&
      !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    fail(path, "expected a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

Vector vector_of(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (size_t k = 0; k < j.size(); ++k) {
    v[static_cast<Eigen::Index>(k)] =
        number(j[k], path + "[" + std::to_string(k) + "]");
  }
  return v;
}

Matrix matrix_of(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty matrix");
  const size_t rows = j.size();
  size_t cols = 0;
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array()) fail(path, "expected an array of rows");
    if (r == 0) cols = j[r].size();
    if (j[r].size() != cols) fail(path, "rows have different lengths");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (size_t r = 0; r < rows; ++r) {
    m.row(static_cast<Eigen::Index>(r)) =
        vector_of(j[r], path + "[" + std::to_string(r) + "]").transpose();
  }
  return m;
}

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v[k]);
  return out;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out.push_back(to_json(Vector(m.row(r).transpose())));
  }
  return out;
}

GameConfig parse_game(const Json& j) {
  if (!j.is_object() || !j.contains("type")) fail("game", "missing 'type'");
  const std::string type = j["type"].is_string() ? j["type"].get<std::string>() : "";
  GameConfig g;
  if (type == "cournot") {
    check_keys(j, "game", {"type", "n", "M", "p1", "p2"});
    for (const char* key : {"M", "p1", "p2"}) {
      if (!j.contains(key)) fail(join("game", key), "required");
    }
    g.kind = GameKind::kCournot;
    g.cournot.m = vector_of(j["M"], "game.M");
    g.cournot.p1 = vector_of(j["p1"], "game.p1");
    g.cournot.p2 = vector_of(j["p2"], "game.p2");
    const Eigen::Index n = g.cournot.m.size();
    if (n == 0) fail("game.M", "must be non-empty");
    if (g.cournot.p1.size() != n) fail("game.p1", "length differs from M");
    if (g.cournot.p2.size() != n) fail("game.p2", "length differs from M");
    if (j.contains("n") && integer(j["n"], "game.n") != n) {
      fail("game.n", "does not match the length of M");
    }
  } else if (type == "bilinear") {
    check_keys(j, "game", {"type", "B"});
    if (!j.contains("B")) fail("game.B", "required");
    g.kind = GameKind::kBilinear;
    g.bilinear = matrix_of(j["B"], "game.B");
  } else if (type == "quadratic") {
    check_keys(j, "game", {"type", "players"});
    if (!j.contains("players") || !j["players"].is_array() ||
        j["players"].size() < 2) {
      fail("game.players", "expected an array of at least two players");
    }
    g.kind = GameKind::kQuadratic;
    for (size_t k = 0; k < j["players"].size(); ++k) {
      const std::string path = "game.players[" + std::to_string(k) + "]";
      const Json& p = j["players"][k];
      check_keys(p, path, {"Q", "C", "b"});
      for (const char* key : {"Q", "C", "b"}) {
        if (!p.contains(key)) fail(join(path, key), "required");
      }
      g.quadratic.players.push_back({matrix_of(p["Q"], path + ".Q"),
                                     matrix_of(p["C"], path + ".C"),
                                     vector_of(p["b"], path + ".b")});
    }
  } else {
    fail("game.type", "expected one of cournot, bilinear, quadratic");
  }
  return g;
}

std::vector<int> game_dims(const GameConfig& g) {
  switch (g.kind) {
    case GameKind::kCournot: {
      const int n = static_cast<int>(g.cournot.m.size());
      return {n, n};
    }
    case GameKind::kBilinear:
      return {static_cast<int>(g.bilinear.rows()),
              static_cast<int>(g.bilinear.cols())};
    case GameKind::kQuadratic: {
      std::vector<int> dims;
      for (const QuadraticPlayer& p : g.quadratic.players) {
        dims.push_back(static_cast<int>(p.q.rows()));
      }
      return dims;
    }
  }
  return {};
}

MirrorConfig parse_mirror(const Json& j, const std::string& path, int dim) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    fail(path, "expected an object with a 'type'");
  }
  const std::string type = j["type"].get<std::string>();
  MirrorConfig m;
  if (type == "entropy") {
    check_keys(j, path, {"type"});
    m.family = MirrorFamily::kNegativeEntropy;
  } else if (type == "identity") {
    check_keys(j, path, {"type"});
    m.a = Matrix::Identity(dim, dim);
  } else if (type == "quadratic") {
    check_keys(j, path, {"type", "A"});
    if (!j.contains("A")) fail(path + ".A", "required");
    m.a = matrix_of(j["A"], path + ".A");
    if (m.a.rows() != dim || m.a.cols() != dim) {
      fail(path + ".A", "expected " + std::to_string(dim) + "x" +
                            std::to_string(dim) + " matrix, got " +
                            shape(m.a));
    }
    try {
      MirrorMap::Quadratic(m.a);
    } catch (const InvariantError& e) {
      fail(path + ".A", e.what());
    }
  } else {
    fail(path + ".type", "expected one of quadratic, identity, entropy");
  }
  return m;
}

}  // namespace

bool OutputConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

const std::vector<std::string>& registered_checks() {
  static const std::vector<std::string> names{
      "lemma1_scan",        "variational_identity", "bellman_value",
      "deviation",          "lyapunov_decay",       "time_average_bound",
      "exp_decay",          "ito_correction",       "hjb_residual",
      "mc_time_average",    "mc_exp_bound",         "order_check"};
  return names;
}

RunConfig parse_config_text(const std::string& text,
                            const std::string& origin) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const size_t byte = std::min(e.byte, text.size());
    size_t line = 1, column = 1;
    for (size_t k = 0; k + 1 < byte; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream os;
    os << origin << ":" << line << ":" << column << ": malformed JSON ("
       << e.what() << ")";
    throw ConfigError(os.str());
  }

  check_keys(j, "", {"schema", "seed", "game", "mirror", "sim", "stochastic",
                     "checks", "output"});
  RunConfig cfg;
  if (!j.contains("schema")) fail("schema", "required (expected 1)");
  cfg.schema = integer(j["schema"], "schema");
  if (cfg.schema != 1) fail("schema", "unsupported version (expected 1)");
  if (j.contains("seed")) cfg.seed = unsigned64(j["seed"], "seed");

  if (!j.contains("game")) fail("game", "required");
  cfg.game = parse_game(j["game"]);
  const std::vector<int> dims = game_dims(cfg.game);
  const int n = [&] {
    int total = 0;
    for (int d : dims) total += d;
    return total;
  }();

  if (j.contains("mirror")) {
    const Json& m = j["mirror"];
    if (!m.is_array()) fail("mirror", "expected an array, one entry per player");
    if (m.size() != dims.size()) {
      fail("mirror", "expected " + std::to_string(dims.size()) +
                         " entries (one per player), got " +
                         std::to_string(m.size()));
    }
    for (size_t k = 0; k < m.size(); ++k) {
      cfg.mirror.push_back(parse_mirror(
          m[k], "mirror[" + std::to_string(k) + "]", dims[k]));
    }
  } else {
    for (int d : dims) cfg.mirror.push_back({MirrorFamily::kQuadratic,
                                             Matrix::Identity(d, d)});
  }

  cfg.sim.x0 = Vector::Zero(n);
  if (j.contains("sim")) {
    const Json& s = j["sim"];
    check_keys(s, "sim", {"T", "dt", "x0"});
    if (s.contains("T")) cfg.sim.horizon = number(s["T"], "sim.T");
    if (s.contains("dt")) cfg.sim.dt = number(s["dt"], "sim.dt");
    if (s.contains("x0")) cfg.sim.x0 = vector_of(s["x0"], "sim.x0");
  }
  if (cfg.sim.x0.size() != n) {
    fail("sim.x0", "expected length " + std::to_string(n));
  }
  try {
    cfg.sim.validate();
  } catch (const InvariantError& e) {
    fail("sim", e.what());
  }

  if (j.contains("stochastic")) {
    const Json& s = j["stochastic"];
    check_keys(s, "stochastic",
               {"epsilon", "T", "dt", "paths", "seed", "x0", "stride"});
    SdeConfig sde;
    sde.horizon = cfg.sim.horizon;
    sde.dt = cfg.sim.dt;
    sde.x0 = cfg.sim.x0;
    sde.seed = cfg.seed;
    if (s.contains("epsilon")) sde.epsilon = number(s["epsilon"], "stochastic.epsilon");
    if (s.contains("T")) sde.horizon = number(s["T"], "stochastic.T");
    if (s.contains("dt")) sde.dt = number(s["dt"], "stochastic.dt");
    if (s.contains("paths")) sde.paths = integer(s["paths"], "stochastic.paths");
    if (s.contains("seed")) sde.seed = unsigned64(s["seed"], "stochastic.seed");
    if (s.contains("x0")) sde.x0 = vector_of(s["x0"], "stochastic.x0");
    if (s.contains("stride")) sde.record_stride = integer(s["stride"], "stochastic.stride");
    if (sde.x0.size() != n) {
      fail("stochastic.x0", "expected length " + std::to_string(n));
    }
    try {
      sde.validate();
    } catch (const InvariantError& e) {
      fail("stochastic", e.what());
    }
    cfg.stochastic = sde;
  }

  if (j.contains("checks")) {
    const Json& c = j["checks"];
    if (!c.is_array()) fail("checks", "expected an array of check names");
    const std::vector<std::string>& valid = registered_checks();
    for (size_t k = 0; k < c.size(); ++k) {
      const std::string path = "checks[" + std::to_string(k) + "]";
      if (!c[k].is_string()) fail(path, "expected a string");
      const std::string name = c[k].get<std::string>();
      if (std::find(valid.begin(), valid.end(), name) == valid.end()) {
        std::string list;
        for (const std::string& v : valid) list += (list.empty() ? "" : ", ") + v;
        fail(path, "unknown check '" + name + "' (valid: " + list + ")");
      }
      if (std::find(cfg.checks.begin(), cfg.checks.end(), name) ==
          cfg.checks.end()) {
        cfg.checks.push_back(name);
      }
    }
  }

  if (j.contains("output")) {
    const Json& o = j["output"];
    check_keys(o, "output", {"dir", "stride", "formats", "raw_paths"});
    if (o.contains("dir")) {
      if (!o["dir"].is_string()) fail("output.dir", "expected a string");
      cfg.output.dir = o["dir"].get<std::string>();
    }
    if (o.contains("stride")) {
      cfg.output.stride = integer(o["stride"], "output.stride");
      if (cfg.output.stride < 1) fail("output.stride", "must be >= 1");
    }
    if (o.contains("formats")) {
      const Json& f = o["formats"];
      if (!f.is_array()) fail("output.formats", "expected an array");
      cfg.output.formats.clear();
      for (const Json& item : f) {
        if (!item.is_string() ||
            (item.get<std::string>() != "csv" && item.get<std::string>() != "json")) {
          fail("output.formats", "entries must be \"csv\" or \"json\"");
        }
        cfg.output.formats.push_back(item.get<std::string>());
      }
    }
    if (o.contains("raw_paths")) {
      cfg.output.raw_paths = integer(o["raw_paths"], "output.raw_paths");
      if (cfg.output.raw_paths < 0) fail("output.raw_paths", "must be >= 0");
    }
  }

  // Semantic validation of the game itself.
  try {
    build_game(cfg);
  } catch (const InvariantError& e) {
    fail("game", e.what());
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

Json serialize_config(const RunConfig& cfg) {
  Json j;
  j["schema"] = cfg.schema;
  j["seed"] = cfg.seed;
  Json game;
  switch (cfg.game.kind) {
    case GameKind::kCournot:
      game["type"] = "cournot";
      game["M"] = to_json(cfg.game.cournot.m);
      game["p1"] = to_json(cfg.game.cournot.p1);
      game["p2"] = to_json(cfg.game.cournot.p2);
      break;
    case GameKind::kBilinear:
      game["type"] = "bilinear";
      game["B"] = to_json(cfg.game.bilinear);
      break;
    case GameKind::kQuadratic:
      game["type"] = "quadratic";
      game["players"] = Json::array();
      for (const QuadraticPlayer& p : cfg.game.quadratic.players) {
        game["players"].push_back(
            Json{{"Q", to_json(p.q)}, {"C", to_json(p.c)}, {"b", to_json(p.b)}});
      }
      break;
  }
  j["game"] = game;
  j["mirror"] = Json::array();
  for (const MirrorConfig& m : cfg.mirror) {
    if (m.family == MirrorFamily::kNegativeEntropy) {
      j["mirror"].push_back(Json{{"type", "entropy"}});
    } else {
      j["mirror"].push_back(Json{{"type", "quadratic"}, {"A", to_json(m.a)}});
    }
  }
  j["sim"] = Json{{"T", cfg.sim.horizon}, {"dt", cfg.sim.dt},
                  {"x0", to_json(cfg.sim.x0)}};
  if (cfg.stochastic) {
    const SdeConfig& s = *cfg.stochastic;
    j["stochastic"] = Json{{"epsilon", s.epsilon}, {"T", s.horizon},
                           {"dt", s.dt},           {"paths", s.paths},
                           {"seed", s.seed},       {"x0", to_json(s.x0)},
                           {"stride", s.record_stride}};
  }
  j["checks"] = cfg.checks;
  j["output"] = Json{{"dir", cfg.output.dir},
                     {"stride", cfg.output.stride},
                     {"formats", cfg.output.formats},
                     {"raw_paths", cfg.output.raw_paths}};
  return j;
}

std::unique_ptr<Game> build_game(const RunConfig& cfg) {
  switch (cfg.game.kind) {
    case GameKind::kCournot:
      return std::make_unique<CournotGame>(cfg.game.cournot);
    case GameKind::kBilinear:
      return std::make_unique<BilinearGame>(cfg.game.bilinear);
    case GameKind::kQuadratic:
      return std::make_unique<QuadraticGame>(cfg.game.quadratic);
  }
  throw ConfigError("unknown game kind");
}

AggregatedMirror build_mirror(const RunConfig& cfg) {
  std::vector<MirrorMap> parts;
  const std::vector<int> dims = game_dims(cfg.game);
  for (size_t k = 0; k < cfg.mirror.size(); ++k) {
    const MirrorConfig& m = cfg.mirror[k];
    parts.push_back(m.family == MirrorFamily::kNegativeEntropy
                        ? MirrorMap::NegativeEntropy(dims[k])
                        : MirrorMap::Quadratic(m.a));
  }
  return AggregatedMirror(std::move(parts));
}

}  // namespace mirrorplay::cli
