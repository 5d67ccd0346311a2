#include "hwmat/records.hpp"

#include <sstream>

#include <json.hpp>

#include "hwmat/errors.hpp"

namespace hwmat {

std::optional<OutputFormat> parse_format(std::string_view name)
{
    if (name == "csv")
        return OutputFormat::Csv;
    if (name == "jsonl")
        return OutputFormat::Jsonl;
    return std::nullopt;
}

std::optional<EmitKind> parse_emit(std::string_view name)
{
    if (name == "matrix")
        return EmitKind::Matrix;
    if (name == "charpoly")
        return EmitKind::Charpoly;
    if (name == "trace")
        return EmitKind::Trace;
    return std::nullopt;
}

std::string format_record(const HasseWittMatrix& w, const ZetaRecord& z, OutputFormat format, EmitKind emit)
{
    const std::size_t g = w.w.size();
    if (format == OutputFormat::Jsonl) {
        nlohmann::ordered_json j;
        j["p"] = w.p;
        auto rows = nlohmann::json::array();
        for (std::size_t i = 0; i < g; ++i) {
            auto row = nlohmann::json::array();
            for (std::size_t k = 0; k < g; ++k)
                row.push_back(w.w(i, k));
            rows.push_back(std::move(row));
        }
        j["w"] = std::move(rows);
        j["charpoly"] = z.charpoly_modp;
        j["lp"] = z.lp_modp;
        j["trace_modp"] = z.trace_modp;
        j["trace"] = z.trace_lifted ? nlohmann::json(*z.trace_lifted) : nlohmann::json(nullptr);
        return j.dump();
    }

    std::ostringstream out;
    out << w.p;
    switch (emit) {
    case EmitKind::Matrix:
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t k = 0; k < g; ++k)
                out << ',' << w.w(i, k);
        break;
    case EmitKind::Charpoly:
        for (const Residue c : z.charpoly_modp)
            out << ',' << c;
        break;
    case EmitKind::Trace:
        out << ',' << z.trace_modp << ',';
        if (z.trace_lifted)
            out << *z.trace_lifted;
        break;
    }
    return out.str();
}

namespace {

[[noreturn]] void bad_line(std::size_t number, const std::string& why)
{
    throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(number) + ": " + why);
}

} // namespace

TraceSeries read_trace_series(std::istream& in, std::optional<int> genus)
{
    TraceSeries series;
    std::optional<int> seen_genus = genus;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty())
            continue;
        if (line.front() == '{') {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
                const int g = static_cast<int>(j.at("w").size());
                if (seen_genus && *seen_genus != g)
                    bad_line(number, "genus changes within the file");
                seen_genus = g;
                if (!j.at("trace").is_null())
                    series.points.push_back({j.at("p").get<std::uint64_t>(), j.at("trace").get<std::int64_t>()});
            } catch (const nlohmann::json::exception& e) {
                bad_line(number, e.what());
            }
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string field; std::getline(ss, field, ',');)
            fields.push_back(field);
        if (line.back() == ',')
            fields.emplace_back();
        if (fields.size() != 3)
            bad_line(number, "expected p,trace_modp,trace_lifted");
        if (!genus)
            bad_line(number, "trace CSV input needs the genus to be given");
        try {
            if (!fields[2].empty())
                series.points.push_back({std::stoull(fields[0]), std::stoll(fields[2])});
        } catch (const std::exception&) {
            bad_line(number, "not an integer");
        }
    }
    if (!seen_genus)
        throw Error(ErrorCode::EmptyInput, "no records and no genus");
    series.g = *seen_genus;
    return series;
}

} // namespace hwmat
