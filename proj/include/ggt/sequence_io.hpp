#ifndef GGT_SEQUENCE_IO_HPP
#define GGT_SEQUENCE_IO_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ggt/part_model.hpp"

// Part-sequence files are JSON Lines: one header object, then one object per frame.
//   {"version":1,"feature_dim":F,"canvas":[W,H],"init_box":[cx,cy,w,h],"superpixel_range":[lo,hi]}
//   {"index":i,"parts":[{"id":n,"cx":x,"cy":y,"area":a,"fg":p,"feat":[...]}],"gt_box":[cx,cy,w,h]}
// "fg", "gt_box" and "superpixel_range" are optional.

namespace ggt {

inline constexpr int kSequenceFormatVersion = 1;

namespace detail {

inline Box box_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 4) throw std::invalid_argument("box must be [cx,cy,w,h]");
    return Box{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

inline nlohmann::json box_to_json(const Box& b) { return nlohmann::json::array({b.cx, b.cy, b.w, b.h}); }

inline Part part_from_json(const nlohmann::json& j) {
    Part p;
    p.id = j.at("id").get<PartId>();
    p.center = {j.at("cx").get<double>(), j.at("cy").get<double>()};
    p.area = j.at("area").get<double>();
    if (auto it = j.find("fg"); it != j.end() && !it->is_null()) p.fg_prob = it->get<double>();
    p.feature = j.at("feat").get<std::vector<double>>();
    return p;
}

inline nlohmann::json part_to_json(const Part& p) {
    nlohmann::json j = {{"id", p.id}, {"cx", p.center.x}, {"cy", p.center.y}, {"area", p.area}};
    if (p.fg_prob) j["fg"] = *p.fg_prob;
    j["feat"] = p.feature;
    return j;
}

}  // namespace detail

inline std::string frame_to_line(const Frame& frame) {
    nlohmann::json j;
    j["index"] = frame.index;
    auto parts = nlohmann::json::array();
    for (const auto& p : frame.parts) parts.push_back(detail::part_to_json(p));
    j["parts"] = std::move(parts);
    if (frame.gt_box) j["gt_box"] = detail::box_to_json(*frame.gt_box);
    return j.dump();
}

inline std::string header_to_line(const Sequence& seq) {
    nlohmann::json j;
    j["version"] = kSequenceFormatVersion;
    j["feature_dim"] = seq.feature_dim;
    j["canvas"] = {seq.canvas.width, seq.canvas.height};
    j["init_box"] = detail::box_to_json(seq.init_box);
    if (seq.superpixel_range)
        j["superpixel_range"] = {seq.superpixel_range->first, seq.superpixel_range->second};
    return j.dump();
}

inline Sequence parse_sequence(std::istream& in) {
    Sequence seq;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
        }
        try {
            if (!have_header) {
                const int version = j.at("version").get<int>();
                if (version != kSequenceFormatVersion)
                    throw std::invalid_argument("unsupported version " + std::to_string(version));
                seq.feature_dim = j.at("feature_dim").get<int>();
                const auto& canvas = j.at("canvas");
                if (!canvas.is_array() || canvas.size() != 2)
                    throw std::invalid_argument("canvas must be [width,height]");
                seq.canvas = {canvas[0].get<double>(), canvas[1].get<double>()};
                seq.init_box = detail::box_from_json(j.at("init_box"));
                if (auto it = j.find("superpixel_range"); it != j.end() && !it->is_null())
                    seq.superpixel_range = {(*it).at(0).get<int>(), (*it).at(1).get<int>()};
                have_header = true;
                continue;
            }
            Frame frame;
            frame.index = j.at("index").get<std::int64_t>();
            for (const auto& pj : j.at("parts")) frame.parts.push_back(detail::part_from_json(pj));
            if (auto it = j.find("gt_box"); it != j.end() && !it->is_null())
                frame.gt_box = detail::box_from_json(*it);
            seq.frames.push_back(std::move(frame));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, e.what());
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
    }
    if (!have_header) throw ParseError(line_no, "missing header line");
    std::stable_sort(seq.frames.begin(), seq.frames.end(),
                     [](const Frame& a, const Frame& b) { return a.index < b.index; });
    validate_sequence(seq);
    return seq;
}

inline Sequence read_sequence(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sequence file " + path.string());
    return parse_sequence(in);
}

inline void write_sequence(const Sequence& seq, std::ostream& out) {
    out << header_to_line(seq) << '\n';
    for (const auto& frame : seq.frames) out << frame_to_line(frame) << '\n';
}

inline void write_sequence(const Sequence& seq, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write sequence file " + path.string());
    write_sequence(seq, out);
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace ggt

#endif  // GGT_SEQUENCE_IO_HPP
