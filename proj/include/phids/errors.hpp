#pragma once

#include <stdexcept>
#include <string>

namespace phids {

/// Base for all library errors so callers can catch one type at the CLI edge.
struct phids_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct unknown_node : phids_error {
    explicit unknown_node(int node)
        : phids_error("unknown node " + std::to_string(node)) {}
};

struct missing_monitoring_rate : phids_error {
    missing_monitoring_rate()
        : phids_error("tec_nm not set; use plane_prime for nodes without a monitoring rate") {}
};

struct no_feasible_selection : phids_error {
    explicit no_feasible_selection(const std::string& why)
        : phids_error("no feasible monitor selection: " + why) {}
};

struct unknown_rule : phids_error {
    explicit unknown_rule(int rule)
        : phids_error("rule " + std::to_string(rule) + " is not in the supported rule set") {}
};

struct length_mismatch : phids_error {
    explicit length_mismatch(const std::string& what) : phids_error(what) {}
};

struct too_large : phids_error {
    explicit too_large(const std::string& what) : phids_error(what) {}
};

struct resolution_error : phids_error {
    explicit resolution_error(const std::string& what) : phids_error(what) {}
};

struct single_class_training : phids_error {
    explicit single_class_training(const std::string& missing)
        : phids_error("training set has no " + missing + " records") {}
};

struct unknown_category : phids_error {
    unknown_category(std::size_t column, const std::string& value)
        : phids_error("column " + std::to_string(column) + ": unseen category \"" + value + "\"") {}
};

struct schema_mismatch : phids_error {
    explicit schema_mismatch(const std::string& what) : phids_error(what) {}
};

struct scenario_invalid : phids_error {
    explicit scenario_invalid(const std::string& field_path, const std::string& why)
        : phids_error("scenario field " + field_path + ": " + why) {}
};

struct incompatible_runs : phids_error {
    explicit incompatible_runs(const std::string& what) : phids_error(what) {}
};

struct empty_input : phids_error {
    explicit empty_input(const std::string& what) : phids_error(what) {}
};

struct parse_error : phids_error {
    parse_error(std::size_t line, const std::string& what)
        : phids_error("line " + std::to_string(line) + ": " + what), line(line) {}
    std::size_t line;
};

}  // namespace phids
