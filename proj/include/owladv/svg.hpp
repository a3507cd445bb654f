#pragma once

#include <string>
#include <vector>

#include "owladv/owl.hpp"

namespace owladv {

struct StemPanel {
    std::string title;
    Vector values;
};

/// Self-contained SVG page with the panels side by side: feature index on
/// x, coefficient on y, one stem per feature. All panels share the y range.
std::string render_stem_page(const std::string& title, const std::vector<StemPanel>& panels);

}  // namespace owladv
