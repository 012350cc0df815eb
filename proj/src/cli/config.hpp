#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace kplug::cli {

// Flat whitelisted key=value configuration. Unknown keys are rejected at
// parse time so a typo'd hyperparameter can never silently fall back to a
// default. Every run serializes the fully resolved table (defaults included)
// into its manifest.
class RunConfig {
  public:
    RunConfig(); // defaults only

    static RunConfig from_file(const std::string& path);
    static RunConfig from_lines(const std::vector<std::string>& lines);

    void set(const std::string& key, const std::string& value); // config error if unknown

    int64_t get_int(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::string get_str(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<int64_t> get_int_list(const std::string& key) const; // comma separated
    std::vector<double> get_double_list(const std::string& key) const;

    // Fully resolved table, sorted by key.
    std::map<std::string, std::string> resolved() const;
    nlohmann::json to_json() const;

    static const std::map<std::string, std::string>& defaults();

  private:
    std::map<std::string, std::string> values_;
};

} // namespace kplug::cli
