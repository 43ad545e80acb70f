// SPDX-License-Identifier: MIT
#include "riskprem/lottery_io.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "riskprem/errors.hpp"

namespace riskprem {

namespace {

std::string trim_copy(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(trim_copy(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

double csv_number(const std::string& field, std::size_t line_no, const char* name) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE) {
        throw ParseError("line " + std::to_string(line_no) + ", field " + name + ": '" + field +
                         "' is not a number");
    }
    return v;
}

}  // namespace

Lottery lottery_from_json_text(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("lottery JSON: ") + e.what());
    }
    if (!j.is_array()) throw ParseError("lottery JSON: expected an array of {\"x\", \"p\"} objects");
    std::vector<State> states;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& e = j[i];
        const std::string where = "lottery JSON: entry " + std::to_string(i);
        if (!e.is_object()) throw ParseError(where + ": expected an object");
        const auto x = e.find("x");
        const auto p = e.find("p");
        if (x == e.end() || !x->is_number()) throw ParseError(where + ", field x: missing or not a number");
        if (p == e.end() || !p->is_number()) throw ParseError(where + ", field p: missing or not a number");
        states.push_back({x->get<double>(), p->get<double>()});
    }
    return Lottery(std::move(states));
}

Lottery lottery_from_csv_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    int col_x = -1, col_p = -1;
    std::size_t n_cols = 0;
    std::vector<State> states;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim_copy(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (col_x < 0) {
            for (std::size_t c = 0; c < fields.size(); ++c) {
                if (fields[c] == "x") col_x = static_cast<int>(c);
                if (fields[c] == "p") col_p = static_cast<int>(c);
            }
            if (col_x < 0 || col_p < 0) {
                throw ParseError("line " + std::to_string(line_no) + ": header must name columns x and p");
            }
            n_cols = fields.size();
            continue;
        }
        if (fields.size() != n_cols) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(n_cols) +
                             " fields, got " + std::to_string(fields.size()));
        }
        states.push_back({csv_number(fields[static_cast<std::size_t>(col_x)], line_no, "x"),
                          csv_number(fields[static_cast<std::size_t>(col_p)], line_no, "p")});
    }
    if (col_x < 0) throw ParseError("lottery CSV: empty input");
    return Lottery(std::move(states));
}

Lottery lottery_from_text(std::string_view text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '[' ? lottery_from_json_text(text) : lottery_from_csv_text(text);
    }
    throw ParseError("lottery input is empty");
}

Lottery load_lottery(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open lottery file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return lottery_from_text(buf.str());
}

}  // namespace riskprem
