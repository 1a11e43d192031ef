#pragma once

// Serialization: exact fraction-string encodings for the value rings, the
// per-character ledger store, JSON reports, and CSV export.
//
// Formats (stable; version tag in report.json):
//   Poly        comma-separated coefficients, constant term first; prime-field
//               elements as integers, extension elements as "[c0 c1 ...]"
//   QuadExt     four fractions "a,b,c,d" on the basis {1, omega, s, omega s}
//   Cyclo       "p:" then 2(p-1) fractions in basis order zeta^i omega^j,
//               i = 0..p-2 major, j = 0,1 minor
//   character   one line: conductor|omega|a_0;...;a_{g+1}|cv1|cv2

#include "moments.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace cubicmoments {

inline std::string quadext_encode(const QuadExtNumber& x) {
    return rat_string(x.a()) + "," + rat_string(x.b()) + "," + rat_string(x.c()) + "," + rat_string(x.d());
}

inline QuadExtNumber quadext_decode(int64_t q, const std::string& s) {
    std::array<Rat, 4> c;
    size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        size_t end = i == 3 ? s.size() : s.find(',', pos);
        if (end == std::string::npos) throw std::invalid_argument("quadext_decode: bad field count");
        c[static_cast<size_t>(i)] = rat_parse(s.substr(pos, end - pos));
        pos = end + 1;
    }
    return QuadExtNumber(q, c[0], c[1], c[2], c[3]);
}

inline std::string cyclo_encode(const CycloNumber& x) {
    std::string s = std::to_string(x.p()) + ":";
    const auto& c = x.coeffs();
    for (size_t i = 0; i < c.size(); ++i) {
        if (i) s += ",";
        s += rat_string(c[i]);
    }
    return s;
}

inline std::string char_record_encode(const FieldSpec& Fq2, const CharRecord& r) {
    std::string s = poly_encode(Fq2, r.F);
    s += "|" + quadext_encode(r.omega) + "|";
    for (size_t i = 0; i < r.L.size(); ++i) {
        if (i) s += ";";
        s += quadext_encode(r.L[i]);
    }
    s += "|" + quadext_encode(r.cv1) + "|" + quadext_encode(r.cv2);
    return s;
}

inline CharRecord char_record_decode(const FieldSpec& Fq2, int64_t q, const std::string& line) {
    CharRecord r;
    std::vector<std::string> parts;
    size_t pos = 0;
    while (true) {
        size_t bar = line.find('|', pos);
        parts.push_back(line.substr(pos, bar == std::string::npos ? std::string::npos : bar - pos));
        if (bar == std::string::npos) break;
        pos = bar + 1;
    }
    if (parts.size() != 5) throw std::invalid_argument("char_record_decode: bad field count");
    r.F = poly_decode(Fq2, parts[0]);
    r.omega = quadext_decode(q, parts[1]);
    std::stringstream ls(parts[2]);
    std::string tok;
    while (std::getline(ls, tok, ';')) r.L.push_back(quadext_decode(q, tok));
    r.cv1 = quadext_decode(q, parts[3]);
    r.cv2 = quadext_decode(q, parts[4]);
    return r;
}

// ---- ledger store ---------------------------------------------------------

inline std::filesystem::path store_dir(const std::string& cache_dir, uint32_t q, int g) {
    return std::filesystem::path(cache_dir) / ("q" + std::to_string(q) + "_g" + std::to_string(g));
}

inline std::string characters_file(const std::string& cache_dir, uint32_t q, int g) {
    return (store_dir(cache_dir, q, g) / "characters.txt").string();
}

inline std::string report_file(const std::string& cache_dir, uint32_t q, int g) {
    return (store_dir(cache_dir, q, g) / "report.json").string();
}

struct CacheLoadResult {
    std::vector<CharRecord> records;
    std::vector<std::string> errors;  // "line N: message"
};

inline CacheLoadResult load_char_records(const FieldSpec& Fq2, int64_t q, const std::string& path) {
    CacheLoadResult out;
    std::ifstream in(path);
    if (!in) return out;
    std::string line;
    size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        try {
            out.records.push_back(char_record_decode(Fq2, q, line));
        } catch (const std::exception& ex) {
            out.errors.push_back("line " + std::to_string(n) + ": " + ex.what());
        }
    }
    return out;
}

inline void save_char_records(const FieldSpec& Fq2, const std::vector<CharRecord>& records,
                              const std::string& path) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream out(path, std::ios::trunc);
    for (const auto& r : records) out << char_record_encode(Fq2, r) << "\n";
}

// ---- JSON report ----------------------------------------------------------

inline nlohmann::json quadext_json(const QuadExtNumber& x) {
    return {{"exact", quadext_encode(x)}, {"float", x.to_complex().real()}};
}

inline nlohmann::json report_json(const CompareReport& r) {
    nlohmann::json j;
    j["schema"] = "cubicmoments-report-v1";
    j["p"] = r.p;
    j["e"] = r.e;
    j["q"] = r.q;
    j["g"] = r.g;
    j["family_count"] = r.family_count;
    j["first_moment"] = quadext_json(r.m1);
    j["second_moment"] = quadext_json(r.m2);
    j["main_term"] = {{"mid", r.main_term_mid},
                      {"enclosure_width", rat_double(r.main_enclosure_width)},
                      {"aq_truncation_degree", r.aq_truncation}};
    j["rel_deviation_vs_empirical"] = r.rel_deviation_vs_empirical;
    j["rel_deviation_vs_main"] = r.rel_deviation_vs_main;
    j["corrected_scale_mid"] = r.corrected_scale_mid;
    if (r.has_sterms) {
        nlohmann::json st = nlohmann::json::array();
        for (size_t t = 0; t < r.sterm_table.size(); ++t) {
            const auto& row = r.sterm_table[t];
            st.push_back({{"t", t},
                          {"prin", quadext_json(row[0])},
                          {"prin_cube", quadext_json(row[1])},
                          {"prin_noncube", quadext_json(row[2])},
                          {"dual", quadext_json(row[3])},
                          {"dual_gauss_route", quadext_json(row[4])},
                          {"dual_routes_agree", row[3] == row[4]}});
        }
        j["s_terms"] = st;
    }
    return j;
}

inline CompareReport report_from_json(int64_t q, const nlohmann::json& j) {
    CompareReport r;
    r.p = j.at("p").get<int64_t>();
    r.e = j.at("e").get<int>();
    r.q = j.at("q").get<uint32_t>();
    r.g = j.at("g").get<int>();
    r.family_count = j.at("family_count").get<uint64_t>();
    r.m1 = quadext_decode(q, j.at("first_moment").at("exact").get<std::string>());
    r.m2 = quadext_decode(q, j.at("second_moment").at("exact").get<std::string>());
    r.m2_float = r.m2.to_complex().real();
    r.main_term_mid = j.at("main_term").at("mid").get<double>();
    r.rel_deviation_vs_empirical = j.at("rel_deviation_vs_empirical").get<double>();
    r.rel_deviation_vs_main = j.at("rel_deviation_vs_main").get<double>();
    if (j.contains("s_terms")) {
        r.has_sterms = true;
        for (const auto& row : j.at("s_terms")) {
            r.sterm_table.push_back({quadext_decode(q, row.at("prin").at("exact").get<std::string>()),
                                     quadext_decode(q, row.at("prin_cube").at("exact").get<std::string>()),
                                     quadext_decode(q, row.at("prin_noncube").at("exact").get<std::string>()),
                                     quadext_decode(q, row.at("dual").at("exact").get<std::string>()),
                                     quadext_decode(q, row.at("dual_gauss_route").at("exact").get<std::string>())});
        }
    }
    return r;
}

// CSV with fixed column order; no locale formatting anywhere
inline void write_gauss_table_csv(std::ostream& os, const FieldTower& T,
                                  const std::vector<GaussSumValue>& rows) {
    os << "V,f,base,value_basis_coefficients,float_re,float_im\n";
    for (const auto& r : rows) {
        auto z = r.value.to_complex();
        os << '"' << poly_encode(T.Fq2, r.V) << "\",\"" << poly_encode(T.Fq2, r.f) << "\"," << r.base_q
           << ",\"" << cyclo_encode(r.value) << "\"," << z.real() << "," << z.imag() << "\n";
    }
}

inline void write_export_csv(std::ostream& os, const FieldSpec& Fq2,
                             const std::vector<CharRecord>& records) {
    os << "conductor,omega,l_coefficients,central_value_k1,central_value_k2\n";
    for (const auto& r : records) {
        os << '"' << poly_encode(Fq2, r.F) << "\",\"" << quadext_encode(r.omega) << "\",\"";
        for (size_t i = 0; i < r.L.size(); ++i) {
            if (i) os << ";";
            os << quadext_encode(r.L[i]);
        }
        os << "\",\"" << quadext_encode(r.cv1) << "\",\"" << quadext_encode(r.cv2) << "\"\n";
    }
}

}  // namespace cubicmoments
