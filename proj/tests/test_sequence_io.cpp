#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ggt/sequence_io.hpp"
#include "test_support.hpp"

using namespace ggt;

namespace {

std::vector<double> random_histogram(std::mt19937_64& rng, int dim) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> h(static_cast<std::size_t>(dim));
    double s = 0.0;
    for (double& v : h) s += (v = u(rng));
    for (double& v : h) v /= s;
    return h;
}

Sequence random_sequence(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> pos(0.0, 500.0);
    std::uniform_real_distribution<double> area(1.0, 300.0);
    std::uniform_real_distribution<double> prob(0.0, 1.0);
    std::uniform_int_distribution<int> count(0, 12);
    Sequence seq;
    seq.feature_dim = std::uniform_int_distribution<int>(1, 9)(rng);
    seq.canvas = {500.0, 400.0};
    seq.init_box = {pos(rng), pos(rng), area(rng), area(rng)};
    if (prob(rng) < 0.5) seq.superpixel_range = {{100, 450}};
    const int frames = count(rng);
    std::int64_t index = 0;
    for (int f = 0; f < frames; ++f) {
        Frame frame;
        index += std::uniform_int_distribution<int>(1, 3)(rng);
        frame.index = index;
        const int parts = count(rng);
        for (int p = 0; p < parts; ++p) {
            std::optional<double> fg;
            if (prob(rng) < 0.7) fg = prob(rng);
            frame.parts.push_back(
                ggt::testing::make_part(p * 7 - 3, {pos(rng), pos(rng)}, area(rng), random_histogram(rng, seq.feature_dim), fg));
        }
        if (prob(rng) < 0.6) frame.gt_box = Box{pos(rng), pos(rng), area(rng), area(rng)};
        seq.frames.push_back(std::move(frame));
    }
    return seq;
}

}  // namespace

TEST(SequenceIo, RoundTripIsIdentityOnRandomSequences) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const Sequence seq = random_sequence(rng);
        std::stringstream ss;
        write_sequence(seq, ss);
        const Sequence back = parse_sequence(ss);
        ASSERT_EQ(back, seq) << "trial " << trial;
    }
}

TEST(SequenceIo, EmptyFrameListIsHeaderOnly) {
    Sequence seq;
    seq.feature_dim = 2;
    seq.canvas = {10, 10};
    seq.init_box = {5, 5, 2, 2};
    std::stringstream ss;
    write_sequence(seq, ss);
    const std::string text = ss.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
    EXPECT_TRUE(parse_sequence(ss).frames.empty());
}

TEST(SequenceIo, OneFrameOnePartIsTwoLines) {
    Sequence seq;
    seq.feature_dim = 2;
    seq.canvas = {10, 10};
    seq.init_box = {5, 5, 2, 2};
    Frame f;
    f.parts.push_back(ggt::testing::make_part(1, {2, 3}, 4, {0.5, 0.5}, 0.9));
    seq.frames.push_back(f);
    std::stringstream ss;
    write_sequence(seq, ss);
    const std::string text = ss.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST(SequenceIo, TwoFrameFileReadsBack) {
    std::istringstream in(
        R"({"version":1,"feature_dim":2,"canvas":[100,80],"init_box":[10,12,6,8]})"
        "\n"
        R"({"index":1,"parts":[{"id":4,"cx":1,"cy":2,"area":3,"feat":[0.5,0.5]}]})"
        "\n"
        R"({"index":0,"parts":[],"gt_box":[10,12,6,8]})"
        "\n");
    const Sequence seq = parse_sequence(in);
    ASSERT_EQ(seq.frames.size(), 2u);
    EXPECT_EQ(seq.frames[0].index, 0);
    EXPECT_EQ(seq.frames[1].index, 1);
    EXPECT_EQ(seq.init_box, (Box{10, 12, 6, 8}));
    EXPECT_FALSE(seq.frames[1].parts[0].fg_prob.has_value());
}

TEST(SequenceIo, MalformedLineReportsLineNumber) {
    std::istringstream in(
        R"({"version":1,"feature_dim":2,"canvas":[100,80],"init_box":[10,12,6,8]})"
        "\n"
        R"({"index":0,"parts":[]})"
        "\n"
        "{not json\n");
    try {
        parse_sequence(in);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(SequenceIo, UnnormalizedFeatureIsValidationError) {
    std::istringstream in(
        R"({"version":1,"feature_dim":2,"canvas":[100,80],"init_box":[10,12,6,8]})"
        "\n"
        R"({"index":0,"parts":[{"id":9,"cx":1,"cy":2,"area":3,"feat":[0.25,0.25]}]})"
        "\n");
    EXPECT_THROW(parse_sequence(in), ValidationError);
}

TEST(SequenceIo, DuplicatePartIdRejected) {
    std::istringstream in(
        R"({"version":1,"feature_dim":1,"canvas":[100,80],"init_box":[10,12,6,8]})"
        "\n"
        R"({"index":0,"parts":[{"id":9,"cx":1,"cy":2,"area":3,"feat":[1]},{"id":9,"cx":5,"cy":2,"area":3,"feat":[1]}]})"
        "\n");
    EXPECT_THROW(parse_sequence(in), ValidationError);
}

TEST(SequenceIo, RepeatedFrameIndexRejected) {
    std::istringstream in(
        R"({"version":1,"feature_dim":1,"canvas":[100,80],"init_box":[10,12,6,8]})"
        "\n"
        R"({"index":2,"parts":[]})"
        "\n"
        R"({"index":2,"parts":[]})"
        "\n");
    EXPECT_THROW(parse_sequence(in), ValidationError);
}

TEST(SequenceIo, FeaturesKeepNineSignificantDigits) {
    Sequence seq;
    seq.feature_dim = 3;
    seq.canvas = {10, 10};
    seq.init_box = {5, 5, 2, 2};
    Frame f;
    f.parts.push_back(ggt::testing::make_part(1, {2, 3}, 4, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}));
    seq.frames.push_back(f);
    std::stringstream ss;
    write_sequence(seq, ss);
    EXPECT_NE(ss.str().find("0.333333333"), std::string::npos);
}
