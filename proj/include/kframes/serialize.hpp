#pragma once

// JSON interchange.
//
// Matrix:  {"rows": R, "cols": C, "re": [row-major], "im": [row-major]}
// Frame:   the matrix of column vectors plus {"dim": d, "count": n, "label": s}
//
// Doubles are written in shortest round-trip form, so load(save(x)) == x
// bit for bit.

#include <filesystem>
#include <string>

#include "json.hpp"

#include "kframes/frame.hpp"
#include "kframes/random.hpp"

namespace kframes {

using Json = nlohmann::json;

Json matrix_to_json(const CMat& m);
CMat matrix_from_json(const Json& j);

Json frame_to_json(const KFrame& f);
KFrame frame_from_json(const Json& j);

Json gen_config_to_json(const GenConfig& cfg);
/// Missing keys keep their defaults.
GenConfig gen_config_from_json(const Json& j, GenConfig base = {});

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace kframes
