#include "iomma/trace_format.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace iomma {

namespace {

std::string ref_fields(const OperandRef& ref) {
    std::string s(1, to_char(ref.matrix));
    s += ' ';
    s += std::to_string(ref.row);
    s += ' ';
    s += std::to_string(ref.col);
    return s;
}

MatrixId parse_matrix(const std::string& tok, std::size_t line_no) {
    if (tok == "A") return MatrixId::A;
    if (tok == "B") return MatrixId::B;
    if (tok == "C") return MatrixId::C;
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad matrix '" + tok + "'");
}

} // namespace

std::string format_event(const TraceEvent& event) {
    return std::visit(
        [](const auto& e) -> std::string {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, Load>) {
                return "L " + ref_fields(e.ref);
            } else if constexpr (std::is_same_v<T, Store>) {
                return "S " + ref_fields(e.ref);
            } else if constexpr (std::is_same_v<T, Evict>) {
                return "E " + ref_fields(e.ref);
            } else {
                return "F " + std::to_string(e.i) + ' ' + std::to_string(e.j) + ' ' + std::to_string(e.p);
            }
        },
        event);
}

void write_trace(std::ostream& out, const Schedule& schedule) {
    for (const auto& e : schedule.events) {
        out << format_event(e) << '\n';
    }
}

Schedule read_trace(std::istream& in, const ProblemDims& dims) {
    Schedule schedule{dims, {}};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        std::istringstream fields(line);
        std::string tag;
        if (!(fields >> tag) || tag[0] == '#') continue;
        auto fail = [&](const std::string& why) {
            return Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + why);
        };

        TraceEvent event;
        if (tag == "F") {
            long long i = -1, j = -1, p = -1;
            if (!(fields >> i >> j >> p) || i < 0 || j < 0 || p < 0) throw fail("expected 'F i j p'");
            event = Fma{static_cast<Index>(i), static_cast<Index>(j), static_cast<Index>(p)};
        } else if (tag == "L" || tag == "S" || tag == "E") {
            std::string mat;
            long long row = -1, col = -1;
            if (!(fields >> mat >> row >> col) || row < 0 || col < 0) {
                throw fail("expected '" + tag + " X i j'");
            }
            OperandRef ref{parse_matrix(mat, line_no), static_cast<Index>(row), static_cast<Index>(col)};
            if (tag == "L") {
                event = Load{ref};
            } else if (tag == "S") {
                event = Store{ref};
            } else {
                event = Evict{ref};
            }
        } else {
            throw fail("unknown event tag '" + tag + "'");
        }

        std::string extra;
        if (fields >> extra) throw fail("trailing field '" + extra + "'");
        if (auto oob = validate_event(event, dims)) {
            throw fail("coordinate " + oob->coordinate + " = " + std::to_string(oob->value) +
                       " out of range [0, " + std::to_string(oob->limit) + ")");
        }
        schedule.events.push_back(event);
    }
    return schedule;
}

} // namespace iomma
