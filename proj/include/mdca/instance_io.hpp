#pragma once

#include "mdca/catalog.hpp"

#include <nlohmann/json.hpp>

namespace mdca {

using Json = nlohmann::json;

// degrees in files are upper degrees; rationals are strings "p" or "p/q"
Instance parse_instance(const Json &doc);
Instance load_instance(const std::string &path); // "catalog:<name>" reads the built-in catalog
Json emit_instance(const Instance &inst);
std::string dump_instance(const Json &doc); // key-sorted, two-space indent, trailing newline

std::vector<std::string> catalog_names();
Json catalog_json(const std::string &name);
Instance catalog_instance(const std::string &name);

// machine-derived quasi instance together with its search certificate
struct QuasiCatalogEntry {
  Json instance;
  Json certificate;
};
QuasiCatalogEntry quasi_catalog_entry();

} // namespace mdca
