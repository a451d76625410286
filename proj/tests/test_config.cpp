#include "fluxusc/io/config.hpp"

#include <gtest/gtest.h>

using namespace fluxusc;
using fluxusc::io::Config;

namespace {

std::string error_text(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(Config, ParsesCommentsAndWhitespace) {
    const auto c = Config::parse("# header\n  EJ_GHz = 250.0  # trailing\n\nalpha=0.7\n");
    EXPECT_EQ(c.number("EJ_GHz"), 250.0);
    EXPECT_EQ(c.number("alpha"), 0.7);
    EXPECT_FALSE(c.has("LR_nH"));
}

TEST(Config, ErrorsNameSourceAndLine) {
    const auto missing_eq = error_text([] { (void)Config::parse("alpha = 0.7\nEJ_GHz 250\n", "run.cfg"); });
    EXPECT_NE(missing_eq.find("run.cfg:2"), std::string::npos) << missing_eq;
    const auto unknown = error_text([] { (void)Config::parse("\n\nbogus_key = 1\n", "run.cfg"); });
    EXPECT_NE(unknown.find("run.cfg:3"), std::string::npos) << unknown;
    EXPECT_NE(unknown.find("bogus_key"), std::string::npos);
    const auto twice = error_text([] { (void)Config::parse("alpha = 0.7\nalpha = 0.8\n", "run.cfg"); });
    EXPECT_NE(twice.find("run.cfg:2"), std::string::npos) << twice;
    EXPECT_NE(twice.find("twice"), std::string::npos);
    EXPECT_FALSE(error_text([] { (void)Config::parse("alpha =\n"); }).empty());
}

TEST(Config, CommandLineOverridesFile) {
    auto c = Config::parse("alpha = 0.7\n");
    c.set_assignment("alpha=0.65");
    EXPECT_EQ(c.number("alpha"), 0.65);
    EXPECT_THROW(c.set_assignment("alpha"), Error);
    EXPECT_THROW(c.set_assignment("nope=1"), Error);
}

TEST(Config, TypedGetters) {
    const auto c = Config::parse("nfock = 40\nprominence = abc\nbaked = yes\nlabels = w01, w02\nflux_list = 0.49,0.5 ,0.51\n");
    EXPECT_EQ(c.integer("nfock", 10), 40);
    EXPECT_EQ(c.integer("ncut1", 7), 7);
    EXPECT_THROW((void)c.number("prominence"), Error);
    EXPECT_TRUE(c.flag("baked", false));
    EXPECT_EQ(c.list("labels", ""), (std::vector<std::string>{"w01", "w02"}));
    EXPECT_EQ(c.numbers("flux_list"), (std::vector<double>{0.49, 0.5, 0.51}));
    try {
        (void)c.number("EJ_GHz");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::missing_parameter);
    }
    const auto bad = Config::parse("nfock = 4.5\nbaked = maybe\nEJ_GHz = inf\n");
    EXPECT_THROW((void)bad.integer("nfock", 1), Error);
    EXPECT_THROW((void)bad.flag("baked", false), Error);
    EXPECT_THROW((void)bad.number("EJ_GHz"), Error);
}

TEST(Config, ResolvedSetRecordsExplicitAndDefaultedKeys) {
    const auto c = Config::parse("alpha = 0.7\nEJ_GHz = 250\n");
    (void)c.number("alpha");
    (void)c.number("LR_nH", 0.9);
    c.note("Csh_fF", "8.7");
    EXPECT_EQ(c.resolved_lines(), (std::vector<std::string>{"Csh_fF=8.7", "LR_nH=0.9", "alpha=0.7"}));
    EXPECT_EQ(c.resolved_json()["LR_nH"], "0.9");
}

TEST(Config, HelpListsEveryKeyOfAGroup) {
    const auto s = io::describe_keys({io::KeyGroup::circuit});
    for (const auto& k : io::config_keys())
        if (k.group == io::KeyGroup::circuit) EXPECT_NE(s.find(std::string(k.name)), std::string::npos) << k.name;
}

TEST(Config, LoadMissingFileIsIoError) {
    try {
        (void)Config::load("/nonexistent/run.cfg");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::io);
    }
}
