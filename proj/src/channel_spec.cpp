#include "resolvon/channel_spec.hpp"

#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "resolvon/error.hpp"
#include "resolvon/report.hpp"

namespace resolvon {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError(path + ": " + what);
}

const Json& field(const Json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

// Trace, hermiticity and positivity, reported against the symbol's path.
void check_density(const ComplexMatrix& m, const std::string& path, const std::string& symbol) {
  const std::string who = "state for symbol '" + symbol + "'";
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermiticityTol * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    fail(path, who + " is not Hermitian");
  }
  const HermitianOperator w(m);
  const double tr = w.trace();
  if (std::abs(tr - 1.0) > kDensityTol) {
    std::ostringstream os;
    os << who << " has trace " << tr << ", expected 1";
    fail(path, os.str());
  }
  const double low = min_eigenvalue(w);
  if (low < -kDensityTol) {
    std::ostringstream os;
    os << who << " is not positive semidefinite (eigenvalue " << low << ")";
    fail(path, os.str());
  }
}

ComplexMatrix parse_matrix(const Json& j, const std::string& path, std::size_t dim) {
  array(j, path);
  if (j.size() != dim) fail(path, "expected " + std::to_string(dim) + " rows, got " + std::to_string(j.size()));
  ComplexMatrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::string rp = index_path(path, r);
    const Json& row = array(j[r], rp);
    if (row.size() != dim) fail(rp, "expected " + std::to_string(dim) + " entries, got " + std::to_string(row.size()));
    for (std::size_t c = 0; c < dim; ++c) {
      const std::string ep = index_path(rp, c);
      const Json& e = array(row[c], ep);
      if (e.size() != 2) fail(ep, "expected a [re, im] pair");
      m(r, c) = Complex(number(e[0], index_path(ep, 0)), number(e[1], index_path(ep, 1)));
    }
  }
  return m;
}

void expand_builtin(ChannelSpec& spec, const std::string& path) {
  spec.matrices.clear();
  if (const auto* b = std::get_if<PureBloch>(&*spec.builtin)) {
    if (b->angles.empty()) fail(path + ".angles", "needs at least one state");
    spec.output_dim = 2;
    for (const auto& [theta, phi] : b->angles) {
      ComplexVector v(2);
      v << std::cos(theta / 2.0), std::polar(1.0, phi) * std::sin(theta / 2.0);
      spec.matrices.push_back(v * v.adjoint());
    }
  } else if (const auto* c = std::get_if<ClassicalEmbed>(&*spec.builtin)) {
    if (c->stochastic.empty()) fail(path + ".stochastic", "needs at least one row");
    spec.output_dim = c->stochastic.front().size();
    if (spec.output_dim == 0) fail(path + ".stochastic[0]", "row is empty");
    for (std::size_t x = 0; x < c->stochastic.size(); ++x) {
      const auto& row = c->stochastic[x];
      const std::string rp = index_path(path + ".stochastic", x);
      if (row.size() != spec.output_dim) fail(rp, "row length differs from the first row");
      RealVector diag(row.size());
      for (std::size_t y = 0; y < row.size(); ++y) {
        if (row[y] < 0.0) fail(index_path(rp, y), "negative probability");
        diag(y) = row[y];
      }
      spec.matrices.push_back(diag.cast<Complex>().asDiagonal());
    }
  } else {
    const double lambda = std::get<DepolarizingPair>(*spec.builtin).lambda;
    if (lambda < 0.0 || lambda > 1.0) fail(path + ".lambda", "must lie in [0, 1]");
    spec.output_dim = 2;
    for (int x = 0; x < 2; ++x) {
      ComplexMatrix m = ComplexMatrix::Identity(2, 2) * (lambda / 2.0);
      m(x, x) += 1.0 - lambda;
      spec.matrices.push_back(m);
    }
  }
}

Builtin parse_builtin(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const Json& kind = field(j, path, "kind");
  if (!kind.is_string()) fail(path + ".kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "pure_bloch") {
    PureBloch b;
    const std::string ap = path + ".angles";
    const Json& angles = array(field(j, path, "angles"), ap);
    for (std::size_t i = 0; i < angles.size(); ++i) {
      const std::string ip = index_path(ap, i);
      const Json& pair = array(angles[i], ip);
      if (pair.size() != 2) fail(ip, "expected a [theta, phi] pair");
      b.angles.emplace_back(number(pair[0], index_path(ip, 0)), number(pair[1], index_path(ip, 1)));
    }
    return b;
  }
  if (k == "classical_embed") {
    ClassicalEmbed c;
    const std::string sp = path + ".stochastic";
    const Json& rows = array(field(j, path, "stochastic"), sp);
    for (std::size_t x = 0; x < rows.size(); ++x) {
      const std::string rp = index_path(sp, x);
      std::vector<double> row;
      for (std::size_t y = 0; y < array(rows[x], rp).size(); ++y) row.push_back(number(rows[x][y], index_path(rp, y)));
      c.stochastic.push_back(std::move(row));
    }
    return c;
  }
  if (k == "depolarizing_pair") return DepolarizingPair{number(field(j, path, "lambda"), path + ".lambda")};
  fail(path + ".kind", "unknown builtin \"" + k + "\" (expected pure_bloch, classical_embed or depolarizing_pair)");
}

}  // namespace

CQChannel ChannelSpec::channel() const {
  std::vector<HermitianOperator> states;
  for (const ComplexMatrix& m : matrices) states.emplace_back(m);
  return CQChannel(symbols, std::move(states));
}

ChannelSpec parse_channel_spec(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("$: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("$", "expected an object");

  ChannelSpec spec;
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) fail("$.name", "expected a string");
    spec.name = it->get<std::string>();
  }
  std::optional<std::size_t> declared_dim;
  if (auto it = doc.find("output_dim"); it != doc.end()) {
    if (!it->is_number_unsigned() || it->get<std::size_t>() == 0) fail("$.output_dim", "expected a positive integer");
    declared_dim = it->get<std::size_t>();
  }
  const bool has_states = doc.contains("states");
  const bool has_builtin = doc.contains("builtin");
  if (has_states == has_builtin) fail("$", "exactly one of \"states\" and \"builtin\" is required");

  if (has_builtin) {
    const std::string bp = "$.builtin";
    spec.builtin = parse_builtin(doc["builtin"], bp);
    expand_builtin(spec, bp);
    if (declared_dim && *declared_dim != spec.output_dim) {
      fail("$.output_dim", "declared " + std::to_string(*declared_dim) + " but the builtin has dimension " +
                               std::to_string(spec.output_dim));
    }
    if (auto it = doc["builtin"].find("symbols"); it != doc["builtin"].end()) {
      const Json& syms = array(*it, bp + ".symbols");
      if (syms.size() != spec.matrices.size()) fail(bp + ".symbols", "expected one label per state");
      for (std::size_t i = 0; i < syms.size(); ++i) {
        if (!syms[i].is_string()) fail(index_path(bp + ".symbols", i), "expected a string");
        spec.symbols.push_back(syms[i].get<std::string>());
      }
    } else {
      for (std::size_t i = 0; i < spec.matrices.size(); ++i) spec.symbols.push_back(std::to_string(i));
    }
  } else {
    if (!declared_dim) fail("$", "missing field \"output_dim\"");
    spec.output_dim = *declared_dim;
    const Json& states = array(doc["states"], "$.states");
    if (states.empty()) fail("$.states", "needs at least one state");
    for (std::size_t i = 0; i < states.size(); ++i) {
      const std::string sp = index_path("$.states", i);
      if (!states[i].is_object()) fail(sp, "expected an object");
      const Json& sym = field(states[i], sp, "symbol");
      if (!sym.is_string()) fail(sp + ".symbol", "expected a string");
      spec.symbols.push_back(sym.get<std::string>());
      spec.matrices.push_back(parse_matrix(field(states[i], sp, "matrix"), sp + ".matrix", spec.output_dim));
    }
  }
  for (std::size_t i = 0; i < spec.symbols.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (spec.symbols[i] == spec.symbols[j]) fail("$", "duplicate symbol '" + spec.symbols[i] + "'");
    }
  }
  const std::string base = has_builtin ? "$.builtin" : "$.states";
  for (std::size_t i = 0; i < spec.matrices.size(); ++i) {
    check_density(spec.matrices[i], has_builtin ? base : index_path(base, i) + ".matrix", spec.symbols[i]);
  }
  return spec;
}

ChannelSpec load_channel_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open channel file '" + path + "': " + std::strerror(errno));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_channel_spec(buf.str());
}

std::string serialize_channel_spec(const ChannelSpec& spec) {
  Json doc;
  doc["name"] = spec.name;
  doc["output_dim"] = spec.output_dim;
  if (spec.builtin) {
    Json b;
    if (const auto* p = std::get_if<PureBloch>(&*spec.builtin)) {
      b["kind"] = "pure_bloch";
      b["angles"] = Json::array();
      for (const auto& [theta, phi] : p->angles) b["angles"].push_back({theta, phi});
    } else if (const auto* c = std::get_if<ClassicalEmbed>(&*spec.builtin)) {
      b["kind"] = "classical_embed";
      b["stochastic"] = c->stochastic;
    } else {
      b["kind"] = "depolarizing_pair";
      b["lambda"] = std::get<DepolarizingPair>(*spec.builtin).lambda;
    }
    b["symbols"] = spec.symbols;
    doc["builtin"] = std::move(b);
  } else {
    doc["states"] = Json::array();
    for (std::size_t i = 0; i < spec.matrices.size(); ++i) {
      Json rows = Json::array();
      for (Eigen::Index r = 0; r < spec.matrices[i].rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < spec.matrices[i].cols(); ++c) {
          row.push_back({spec.matrices[i](r, c).real(), spec.matrices[i](r, c).imag()});
        }
        rows.push_back(std::move(row));
      }
      doc["states"].push_back({{"symbol", spec.symbols[i]}, {"matrix", std::move(rows)}});
    }
  }
  return dump_json(doc);
}

}  // namespace resolvon
