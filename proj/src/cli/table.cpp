#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "sabr_ldp/cli.hpp"

namespace sabr_ldp::cli {

namespace {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string csv_cell(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) return format_number(*d);
    if (auto i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    const std::string& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

nlohmann::ordered_json json_cell(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) {
        if (!std::isfinite(*d)) return nullptr;
        return *d;
    }
    if (auto i = std::get_if<std::int64_t>(&c)) return *i;
    return std::get<std::string>(c);
}

nlohmann::ordered_json json_table(const Table& t) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json rec;
        for (std::size_t j = 0; j < t.columns.size() && j < row.size(); ++j)
            rec[t.columns[j]] = json_cell(row[j]);
        arr.push_back(std::move(rec));
    }
    return arr;
}

}  // namespace

void write_csv(const Report& r, std::ostream& os) {
    bool first = true;
    for (const Table& t : r.tables) {
        if (!first) os << '\n';
        first = false;
        for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << t.columns[j];
        os << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << csv_cell(row[j]);
            os << '\n';
        }
    }
}

void write_json(const Report& r, std::ostream& os) {
    if (r.tables.size() == 1) {
        os << json_table(r.tables.front()).dump(2) << '\n';
        return;
    }
    nlohmann::ordered_json obj;
    for (const Table& t : r.tables) obj[t.name] = json_table(t);
    os << obj.dump(2) << '\n';
}

}  // namespace sabr_ldp::cli
