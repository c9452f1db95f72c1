#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "hypiso/chart.hpp"
#include "hypiso/measure.hpp"
#include "hypiso/verify.hpp"

namespace hypiso {

// Insertion-ordered JSON document with fixed float formatting
// (17 significant digits), so identical data dumps byte-identically.
class JsonValue {
public:
    JsonValue() : data_(nullptr) {}
    JsonValue(bool b) : data_(b) {}
    JsonValue(double d) : data_(d) {}
    JsonValue(int i) : data_(static_cast<std::int64_t>(i)) {}
    JsonValue(long i) : data_(static_cast<std::int64_t>(i)) {}
    JsonValue(long long i) : data_(static_cast<std::int64_t>(i)) {}
    JsonValue(unsigned i) : data_(static_cast<std::int64_t>(i)) {}
    JsonValue(const char* s) : data_(std::string(s)) {}
    JsonValue(std::string s) : data_(std::move(s)) {}

    static JsonValue object();
    static JsonValue array();

    JsonValue& set(const std::string& key, JsonValue v); // objects
    JsonValue& push(JsonValue v);                        // arrays

    std::string dump(int indent = 2) const;

private:
    struct ObjectTag {};
    struct ArrayTag {};
    using Object = std::vector<std::pair<std::string, JsonValue>>;
    using Array = std::vector<JsonValue>;
    std::variant<std::nullptr_t, bool, std::int64_t, double, std::string,
                 std::shared_ptr<Object>, std::shared_ptr<Array>>
        data_;
    void dump_to(std::string& out, int indent, int level) const;
};

// "%.17g"
std::string format_g17(double v);

JsonValue to_json(const VolumeReport& rep);
JsonValue to_json(const MonotonicityCurve& curve);
JsonValue to_json(const DensityEstimate& est);
JsonValue to_json(const InequalityVerdict& verdict);
JsonValue to_json(const MobiusVolumeResult& res);

// "r,ratio" two-column document.
std::string curve_to_csv(const MonotonicityCurve& curve);

// Schema "hypiso-submanifold-v1": k, n, flags, chart parameter boxes with
// sampled point grids.
JsonValue submanifold_to_json(const Submanifold& sigma, int grid = 8);

} // namespace hypiso
