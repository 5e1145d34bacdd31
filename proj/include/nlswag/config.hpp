// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_CONFIG_HPP
#define NLSWAG_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>

#include "nlswag/filter.hpp"

namespace nlswag {

// Flat key = value configuration ('#' starts a comment).  Unknown keys are
// rejected.  CLI flags override file values.
struct RunConfig {
    FilterParams params;
    std::uint64_t seed = 1;
    std::string method = "nlswag";  // boxcar | stage1 | nlswag
    int boxcar_k = 5;
    std::string xi_table_path;  // optional override of the embedded table

    static RunConfig from_file(const std::string& path);
    void apply_line(const std::string& key, const std::string& value);
    void validate() const;
};

}  // namespace nlswag

#endif
