#include <cinttypes>
#include <cstdio>
#include <string>

#include "frobcert/casework.hpp"

#include <json.hpp>

namespace frobcert {

namespace {

std::string real17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace

std::string certificate_to_json(const Certificate& cert) {
  std::string out = "{";
  out += "\"a\":" + std::to_string(cert.pair.a);
  out += ",\"b\":" + std::to_string(cert.pair.b);
  out += ",\"g\":" + std::to_string(cert.pair.g);
  out += ",\"label\":" + quoted(to_string(cert.label));
  if (cert.is_witness()) {
    const WitnessCertificate& w = cert.witness();
    out += ",\"kind\":\"witness\"";
    out += ",\"witness\":{\"p\":" + std::to_string(w.p);
    out += ",\"x\":" + std::to_string(w.rep.x);
    out += ",\"y\":" + std::to_string(w.rep.y) + "}";
  } else {
    const MarginReport& m = cert.margin();
    out += ",\"kind\":\"analytic\"";
    out += ",\"margin_report\":{\"main\":" + real17(m.main_term);
    out += ",\"deductions\":[";
    for (size_t i = 0; i < m.deductions.size(); ++i) {
      if (i) out += ',';
      out += "{\"name\":" + quoted(m.deductions[i].name);
      out += ",\"value\":" + real17(m.deductions[i].value) + "}";
    }
    out += "]";
    out += ",\"margin\":" + real17(m.margin);
    out += ",\"slack\":" + real17(m.safety_slack) + "}";
  }
  out += ",\"schema_version\":1}";
  return out;
}

Certificate certificate_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("certificate_from_json: parse failure: ") + e.what());
  }
  try {
    if (j.at("schema_version").get<int>() != 1)
      throw Error("certificate_from_json: unsupported schema_version");

    Certificate cert;
    cert.pair = make_pair(j.at("a").get<u64>(), j.at("b").get<u64>());
    if (cert.pair.g != j.at("g").get<u64>())
      throw Error("certificate_from_json: g does not match a*b-a-b");

    const auto label = case_label_from_string(j.at("label").get<std::string>());
    if (!label) throw Error("certificate_from_json: unknown label");
    cert.label = *label;

    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "witness") {
      const auto& w = j.at("witness");
      WitnessCertificate wc;
      wc.p = w.at("p").get<u64>();
      wc.rep = Representation{w.at("x").get<u64>(), w.at("y").get<u64>(), wc.p};
      cert.body = wc;
    } else if (kind == "analytic") {
      const auto& m = j.at("margin_report");
      MarginReport report;
      report.label = cert.label;
      report.main_term = m.at("main").get<double>();
      for (const auto& d : m.at("deductions"))
        report.deductions.push_back(
            {d.at("name").get<std::string>(), d.at("value").get<double>()});
      report.margin = m.at("margin").get<double>();
      report.safety_slack = m.at("slack").get<double>();
      report.a = cert.pair.a;
      report.b = cert.pair.b;
      report.g = cert.pair.g;
      cert.body = report;
    } else {
      throw Error("certificate_from_json: kind must be witness or analytic");
    }
    return cert;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("certificate_from_json: bad fields: ") + e.what());
  }
}

}  // namespace frobcert
