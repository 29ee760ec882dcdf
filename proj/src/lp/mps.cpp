#include "vpp/lp/mps.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace vpp::lp {
namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string field(const std::string& s, std::size_t width) {
    std::string out = s;
    if (out.size() < width) out.append(width - out.size(), ' ');
    return out;
}

void entry(std::ostream& out, const std::string& col, const std::string& row, double v) {
    out << "    " << field(col, 8) << "  " << field(row, 8) << "  " << num(v) << '\n';
}

}  // namespace

void writeMps(const LinearProgram& program, std::ostream& out, const char* name) {
    const auto& rows = program.constraints();
    const auto& vars = program.variables();
    out << "NAME          " << name << '\n';
    out << "ROWS\n N  COST\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const char tag = rows[i].sense == Sense::LessEqual      ? 'L'
                         : rows[i].sense == Sense::GreaterEqual ? 'G'
                                                                : 'E';
        out << ' ' << tag << "  R" << i << '\n';
    }

    std::vector<std::vector<std::pair<std::size_t, double>>> cols(vars.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const Term& t : rows[i].terms) cols[static_cast<std::size_t>(t.var)].emplace_back(i, t.coef);

    out << "COLUMNS\n";
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const std::string col = "C" + std::to_string(j);
        if (!vars[j].name.empty()) out << "* " << col << " " << vars[j].name << '\n';
        if (program.objective()[j] != 0.0) entry(out, col, "COST", program.objective()[j]);
        for (const auto& [i, v] : cols[j]) entry(out, col, "R" + std::to_string(i), v);
    }
    out << "RHS\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].rhs != 0.0) entry(out, "RHS", "R" + std::to_string(i), rows[i].rhs);
    if (program.objectiveConstant() != 0.0) entry(out, "RHS", "COST", -program.objectiveConstant());

    out << "BOUNDS\n";
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const std::string col = "C" + std::to_string(j);
        const double lo = vars[j].lower, up = vars[j].upper;
        if (lo == up) {
            out << " FX BND       " << field(col, 8) << "  " << num(lo) << '\n';
            continue;
        }
        if (std::isinf(lo) && std::isinf(up)) {
            out << " FR BND       " << col << '\n';
            continue;
        }
        if (std::isinf(lo)) out << " MI BND       " << col << '\n';
        else if (lo != 0.0) out << " LO BND       " << field(col, 8) << "  " << num(lo) << '\n';
        if (!std::isinf(up)) out << " UP BND       " << field(col, 8) << "  " << num(up) << '\n';
    }
    out << "ENDATA\n";
}

}  // namespace vpp::lp
