#include "resolvon/report.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "resolvon/error.hpp"

namespace resolvon {

namespace {

void write(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        write(it.value(), out, indent + 2);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const Json& e : j) flat = flat && !e.is_structured();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i != 0) out += ", ";
          write(j[i], out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i != 0) out += ",\n";
        out += pad;
        write(j[i], out, indent + 2);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }
Json optional_json(const std::optional<bool>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) throw NumericalError("cannot serialize a non-finite number");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const Json& j) {
  std::string out;
  write(j, out, 0);
  out += "\n";
  return out;
}

Json to_json(const SoftCoverParams& p) {
  return Json{{"epsilon", p.epsilon}, {"tau", p.tau}, {"tau0", p.tau0}, {"eta", p.eta}};
}

Json to_json(const CoverCertificate& c) {
  Json j;
  j["certified"] = c.certified();
  j["violations"] = c.violations();
  j["unmet_preconditions"] = c.unmet_preconditions;
  j["trace_dist"] = c.trace_dist;
  j["theorem2_bound"] = c.theorem2_bound;
  j["theorem2_holds"] = optional_json(c.theorem2_holds);
  j["d_max"] = c.d_max;
  j["l_used"] = c.l_used;
  j["l_required"] = c.l_required;
  j["l_required_degenerate"] = c.l_required_degenerate;
  j["lemma3_required"] = c.lemma3_required;
  j["lemma3_margin"] = c.lemma3_margin;
  j["lemma3_holds"] = optional_json(c.lemma3_holds);
  j["lemma2_min_margin"] = optional_json(c.lemma2_min_margin);
  j["regret_gap"] = optional_json(c.regret_gap);
  j["lemma4_bound"] = c.lemma4_bound;
  j["lemma4_holds"] = optional_json(c.lemma4_holds);
  j["threshold"] = c.threshold;
  j["pi1_rank"] = c.pi1_rank;
  j["base_mass"] = c.base_mass;
  j["base_mass_on_pi0"] = c.base_mass_on_pi0;
  j["base_mass_on_pi0_bound"] = c.base_mass_on_pi0_bound;
  j["codebook_mass_on_pi1"] = c.codebook_mass_on_pi1;
  j["codebook_mass_floor"] = c.codebook_mass_floor;
  j["gentle_norm"] = c.gentle_norm;
  j["gentle_bound"] = c.gentle_bound;
  j["terms"] = Json{{"base_pinch", c.terms.base_pinch},
                    {"codebook_pinch", c.terms.codebook_pinch},
                    {"core", c.terms.core}};
  return j;
}

Json to_json(const BoundTerms& b) {
  return Json{{"epsilon_term", b.epsilon_term}, {"tau_term", b.tau_term},
              {"tau0_term", b.tau0_term},       {"root_term", b.root_term},
              {"unpinch_term", b.unpinch_term}, {"total", b.total()}};
}

Json to_json(const TypeClass& t) {
  return Json{{"n", t.n}, {"counts", t.counts}, {"class_size", t.class_size}};
}

Json to_json(const Sequence& s) { return Json(s); }

Json to_json(const ResolvabilityReport& r) {
  Json j;
  j["type"] = to_json(r.type);
  j["trace_dist"] = r.trace_dist;
  j["bound"] = r.bound;
  j["terms"] = to_json(r.terms);
  j["codebook_size"] = r.codebook_size;
  j["required_size"] = r.required_size;
  j["required_size_literal_log"] = optional_json(r.required_size_literal_log);
  j["holevo_info"] = r.holevo_info;
  j["output_entropy"] = r.output_entropy;
  j["conditional_entropy"] = r.conditional_entropy;
  j["d_max"] = r.d_max;
  j["alpha"] = r.alpha;
  j["alpha_output"] = r.alpha_output;
  j["eta"] = r.eta;
  j["threshold"] = r.cover.threshold;
  j["ambient_dim"] = r.ambient_dim;
  j["vertex_dim"] = r.vertex_dim;
  j["edge_count"] = r.edge_count;
  j["edge_gap_max"] = r.edge_gap_max;
  j["edge_gap_bound"] = r.edge_gap_bound;
  j["min_edge_trace"] = r.min_edge_trace;
  j["edge_trace_floor"] = r.edge_trace_floor;
  j["baseline_trace_dist"] = optional_json(r.baseline_trace_dist);
  j["violations"] = r.violations();
  j["cover"] = to_json(r.cover);
  return j;
}

Json to_json(const GeneralResolveReport& r) {
  Json j;
  j["n"] = r.n;
  j["trace_dist"] = r.trace_dist;
  j["bound"] = r.bound;
  j["type_tv"] = r.type_tv;
  j["type_tv_target"] = r.type_tv_target;
  j["type_epsilon"] = r.type_epsilon;
  j["type_rounds"] = r.type_rounds;
  j["per_type_size"] = r.per_type_size;
  j["codebook_size"] = r.codebook_size;
  j["violations"] = r.violations();
  j["type_cover"] = r.type_cover ? to_json(*r.type_cover) : Json(nullptr);
  j["components"] = Json::array();
  for (const TypeComponent& c : r.components) {
    j["components"].push_back(
        Json{{"weight", c.weight}, {"multiplicity", c.multiplicity}, {"report", to_json(c.report)}});
  }
  return j;
}

Json to_json(const BaselineStats& s) {
  return Json{{"mean", s.mean}, {"min", s.min}, {"max", s.max}, {"trials", s.trials}};
}

Json to_json(const SweepRow& row) {
  return Json{{"L", row.l},
              {"trace_dist", row.trace_dist},
              {"bound", row.bound},
              {"d_max", row.d_max},
              {"required_L", row.required_l},
              {"baseline_mean", optional_json(row.baseline_mean)}};
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = kSweepCsvHeader;
  out += "\n";
  for (const SweepRow& r : rows) {
    out += std::to_string(r.l) + "," + format_double(r.trace_dist) + "," + format_double(r.bound) + "," +
           format_double(r.d_max) + "," + std::to_string(r.required_l) + "," +
           (r.baseline_mean ? format_double(*r.baseline_mean) : std::string()) + "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing: " + std::strerror(errno));
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed: " + std::strerror(errno));
}

}  // namespace resolvon
