#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "cpg/optimize.hpp"
#include "cpg/oscillator.hpp"
#include "cpg/simulator.hpp"

namespace cpg {

using Json = nlohmann::ordered_json;

/// Reads a JSON object and reports missing/mistyped/unknown members with their dotted path.
/// Every accessor throws ParseError("<path>.<key>: ...").
class JsonReader {
public:
    JsonReader(const Json& node, std::string path);

    bool has(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    double number(const std::string& key) const;
    std::size_t count(const std::string& key, std::size_t fallback) const;
    std::uint64_t seed(const std::string& key, std::uint64_t fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    std::string text(const std::string& key, const std::string& fallback) const;
    JsonReader object(const std::string& key) const;
    const Json& raw(const std::string& key) const;
    std::string path(const std::string& key) const;

    /// Rejects members not in `allowed`.
    void only(std::initializer_list<std::string_view> allowed) const;

private:
    const Json& at(const std::string& key) const;

    const Json& node_;
    std::string path_;
};

Json to_json(const OscillatorParams& p);
OscillatorParams oscillator_params_from(const JsonReader& in);

Json to_json(const SimConfig& c);
SimConfig sim_config_from(const JsonReader& in);

Json to_json(const HsParams& p);
HsParams hs_params_from(const JsonReader& in);

Json to_json(const GaParams& p);
GaParams ga_params_from(const JsonReader& in);

/// Ten-gene bounds as {"tau1": [lo, hi], ...}; other dimensions as [[lo, hi], ...].
Json to_json(const SearchBounds& b);
SearchBounds search_bounds_from(const Json& node, const std::string& path);

/// {"tau1": ..., ..., "b2": ...}
Json to_json(const Genome& g);
Genome genome_from(const JsonReader& in);

/// {x, y, fell, fall_time, fitness, cause, exchanges}
Json to_json(const SimResult& r);

std::string_view lock_mode_name(LockMode m);
LockMode parse_lock_mode(std::string_view s);
std::string_view tau_unit_name(TauUnit u);
TauUnit parse_tau_unit(std::string_view s);

/// Parses a file; ParseError carries the path and parser position, IoError if unreadable.
Json read_json_file(const std::filesystem::path& file);
/// Pretty-printed with a trailing newline; throws IoError with the path.
void write_json_file(const std::filesystem::path& file, const Json& value);
/// Writes `text` exactly; throws IoError with the path.
void write_text_file(const std::filesystem::path& file, const std::string& text);

/// Loads a genome file: either a bare gene object or one with a "genome" member
/// (the best-genome files written by the optimizer runs).
Genome load_genome(const std::filesystem::path& file);

}  // namespace cpg
