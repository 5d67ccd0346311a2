#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hwmat/reconstruct.hpp"
#include "hwmat/zeta.hpp"

namespace hwmat {

enum class OutputFormat { Csv, Jsonl };
enum class EmitKind { Matrix, Charpoly, Trace };

std::optional<OutputFormat> parse_format(std::string_view name);
std::optional<EmitKind> parse_emit(std::string_view name);

/// One output line, without the trailing newline.
///   csv matrix:    p,w11,w12,...,wgg
///   csv charpoly:  p,c0,...,cg           (det(xI - W) mod p, x^0 first)
///   csv trace:     p,trace_modp,trace_lifted   (last field empty when not lifted)
///   jsonl:         {"p":..,"w":[[..]],"charpoly":[..],"lp":[..],"trace_modp":..,"trace":..|null}
std::string format_record(const HasseWittMatrix& w, const ZetaRecord& z, OutputFormat format, EmitKind emit);

struct TraceSeries {
    int g = 0;
    std::vector<TracePoint> points;  // only primes with a lifted trace
};

/// Reads a prior batch output: JSONL (genus taken from the matrix size) or
/// trace CSV (genus must be supplied). Throws Error{InvalidArgument} on
/// malformed lines.
TraceSeries read_trace_series(std::istream& in, std::optional<int> genus);

} // namespace hwmat
