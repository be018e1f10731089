#include "csim/certificate.hpp"

#include <json.hpp>

#include "csim/errors.hpp"
#include "csim/io.hpp"

namespace csim {

std::string certificate_to_json(const MisiurewiczCertificate& cert) {
    auto line = [](const char* key, const std::string& value, bool last = false) {
        return std::string("  \"") + key + "\": " + value + (last ? "\n" : ",\n");
    };
    std::string out = "{\n";
    out += line("p", std::to_string(cert.p));
    out += line("ell", std::to_string(cert.ell));
    out += line("m", std::to_string(cert.m));
    out += line("a", format_complex_json(cert.map.a));
    out += line("v", format_complex_json(cert.map.v));
    out += line("a0", format_complex_json(cert.a0));
    out += line("lambda0", format_complex_json(cert.lambda0));
    out += line("A0", format_complex_json(cert.A0));
    out += line("B0", format_complex_json(cert.B0));
    out += line("B0_error", format_double(cert.B0_error));
    out += line("Q", format_complex_json(cert.Q));
    out += line("q", format_complex_json(cert.q));
    out += line("chart_kind", std::string("\"") + to_string(cert.chart.kind) + "\"");
    out += line("domain_radius", format_double(cert.chart.domain_radius), true);
    out += "}\n";
    return out;
}

namespace {

Complex complex_field(const nlohmann::json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2) fail(ErrorKind::Io, std::string("field '") + key + "' must be [re, im]");
    return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

MisiurewiczCertificate certificate_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Io, std::string("certificate is not valid JSON: ") + e.what());
    }
    MisiurewiczCertificate cert;
    ChartKind kind{};
    double domain = 0.0;
    try {
        cert.p = j.at("p").get<int>();
        cert.ell = j.at("ell").get<int>();
        cert.m = j.at("m").get<int>();
        cert.map = {complex_field(j, "a"), complex_field(j, "v")};
        cert.a0 = complex_field(j, "a0");
        cert.lambda0 = complex_field(j, "lambda0");
        cert.A0 = complex_field(j, "A0");
        cert.B0 = complex_field(j, "B0");
        cert.B0_error = j.value("B0_error", 0.0);
        cert.Q = complex_field(j, "Q");
        cert.q = complex_field(j, "q");
        kind = chart_kind_from_string(j.at("chart_kind").get<std::string>());
        domain = j.at("domain_radius").get<double>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Io, std::string("certificate field error: ") + e.what());
    }
    if (cert.p < 1 || cert.ell < 1 || cert.m < 1) fail(ErrorKind::Io, "certificate p, ell, m must be positive");
    cert.chart = chart_for(cert.map, cert.p, kind, domain);
    return cert;
}

}  // namespace csim
