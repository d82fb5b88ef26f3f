#include "faultseg/error.hpp"
#include "faultseg/signal_io.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace faultseg;

TEST_CASE("record invariants are enforced at construction")
{
    CHECK_THROWS_AS(Record("x", Unit::volt, 0.0, {1.0}), ConfigError);
    CHECK_THROWS_AS(Record("x", Unit::volt, 2500, {}), ConfigError);
    CHECK_THROWS_AS(Record("x", Unit::volt, 2500, {1.0, NAN}), ConfigError);
    CHECK_THROWS_AS(Record("x", Unit::volt, 2500, {1.0, INFINITY}), ConfigError);
    CHECK_NOTHROW(Record("x", Unit::volt, 2500, {1.0}));
}

TEST_CASE("load_csv infers fs from the time column")
{
    const auto dir = oracle::scratch_dir("csv");
    const auto path = dir / "rec.csv";
    oracle::write_text(path, "t,Ia[A],Va[V]\n0,1,10\n0.0004,2,20\n0.0008,3,30\n0.0012,4,40\n");
    const auto set = io::load_csv(path);
    REQUIRE(set.records.size() == 2);
    CHECK(set.records[0].fs() == doctest::Approx(2500).epsilon(1e-12));
    CHECK(set.records[0].channel_id() == "Ia");
    CHECK(set.records[0].unit() == Unit::ampere);
    CHECK(set.records[1].unit() == Unit::volt);
    CHECK(set.records[1][3] == 40.0);

    CHECK_NOTHROW(io::load_csv(path, 2501.0));
    CHECK_THROWS_WITH_AS(io::load_csv(path, 2600.0), doctest::Contains("fs disagreement"),
                         ConfigError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("load_csv single column needs fs")
{
    const auto dir = oracle::scratch_dir("csv1");
    const auto path = dir / "one.csv";
    oracle::write_text(path, "Ia\n1\n2\n3\n");
    const auto set = io::load_csv(path, 2500.0);
    REQUIRE(set.records.size() == 1);
    CHECK(set.records[0].fs() == 2500);
    CHECK(set.records[0].size() == 3);
    CHECK_THROWS_AS(io::load_csv(path), ConfigError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("load_csv error paths")
{
    const auto dir = oracle::scratch_dir("csverr");
    CHECK_THROWS_AS(io::load_csv(dir / "missing.csv", 2500.0), ParseError);

    oracle::write_text(dir / "nan.csv", "a,b\n1,2\n3,NaN\n");
    CHECK_THROWS_WITH_AS(io::load_csv(dir / "nan.csv", 2500.0),
                         "non-numeric cell at row 3, column 2", ParseError);

    oracle::write_text(dir / "text.csv", "a\n1\nabc\n");
    CHECK_THROWS_WITH_AS(io::load_csv(dir / "text.csv", 2500.0),
                         "non-numeric cell at row 3, column 1", ParseError);

    oracle::write_text(dir / "ragged.csv", "a,b\n1,2\n3\n");
    CHECK_THROWS_AS(io::load_csv(dir / "ragged.csv", 2500.0), ParseError);

    oracle::write_text(dir / "back.csv", "time,a\n0,1\n0.001,2\n0.0005,3\n");
    CHECK_THROWS_WITH_AS(io::load_csv(dir / "back.csv"), doctest::Contains("not increasing"),
                         ParseError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("CSV round trip restores samples bit for bit")
{
    std::mt19937_64 rng(7);
    const auto dir = oracle::scratch_dir("rt");
    for (int trial = 0; trial < 20; ++trial) {
        RecordSet set;
        set.source = "mem";
        const std::size_t n = 2 + rng() % 300;
        auto a = oracle::random_signal(n, rng);
        auto b = oracle::random_signal(n, rng);
        for (auto& v : b)
            v *= std::pow(10.0, static_cast<double>(rng() % 40) - 20.0);
        set.records.emplace_back("Ia", Unit::ampere, 2500.0, a);
        set.records.emplace_back("Vb", Unit::volt, 2500.0, b);
        io::write_csv(set, dir / "rt.csv");
        const auto back = io::load_csv(dir / "rt.csv");
        REQUIRE(back.records.size() == 2);
        CHECK(back.records[0].fs() == doctest::Approx(2500.0).epsilon(1e-9));
        for (std::size_t k = 0; k < n; ++k) {
            REQUIRE(back.records[0][k] == a[k]);
            REQUIRE(back.records[1][k] == b[k]);
        }
        CHECK(back.records[1].unit() == Unit::volt);
    }
    std::filesystem::remove_all(dir);
}

namespace {

std::filesystem::path write_comtrade(const std::filesystem::path& dir, const std::string& cfg,
                                     const std::string& dat)
{
    oracle::write_text(dir / "rec.cfg", cfg);
    oracle::write_text(dir / "rec.dat", dat);
    return dir / "rec.cfg";
}

const char* header = "SUBSTATION,DFR1\n";
const char* tail_1rate = "50\n1\n2500,2\n01/01/2005,00:00:00.000000\n01/01/2005,00:00:00.000000\n";

} // namespace

TEST_CASE("COMTRADE 1991 ASCII: scaling and channel selection")
{
    const auto dir = oracle::scratch_dir("cmt");
    const auto cfg = write_comtrade(
        dir,
        std::string(header) + "2,1A,1D\n1,IA,R,,A,0.5,0,0,-32767,32767\n1,BRK,0\n" + tail_1rate +
            "ASCII\n",
        "1,0,2,1\n2,400,4,0\n");
    const auto set = io::load_comtrade_1991_ascii(cfg);
    REQUIRE(set.records.size() == 1);
    const auto& r = set.records[0];
    CHECK(r.channel_id() == "IA");
    CHECK(r.unit() == Unit::ampere);
    CHECK(r.fs() == 2500.0);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == 1.0);
    CHECK(r[1] == 2.0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("COMTRADE offset term and error paths")
{
    const auto dir = oracle::scratch_dir("cmterr");
    auto cfg = write_comtrade(dir,
                              std::string(header) + "1,1A,0D\n1,VA,R,,kV,2,-1,0,-100,100\n" +
                                  tail_1rate + "ASCII\n",
                              "1,0,3\n2,400,-3\n");
    auto set = io::load_comtrade_1991_ascii(cfg);
    CHECK(set.records[0][0] == 5.0);
    CHECK(set.records[0][1] == -7.0);
    CHECK(set.records[0].unit() == Unit::volt);

    cfg = write_comtrade(dir,
                         std::string(header) + "1,1A,0D\n1,VA,R,,V,1,0,0,-1,1\n" + tail_1rate +
                             "BINARY\n",
                         "");
    CHECK_THROWS_WITH_AS(io::load_comtrade_1991_ascii(cfg), "binary COMTRADE not supported",
                         ParseError);

    cfg = write_comtrade(dir,
                         std::string(header) +
                             "1,1A,0D\n1,VA,R,,V,1,0,0,-1,1\n50\n2\n2500,10\n5000,20\n"
                             "01/01/2005,00:00:00.000000\n01/01/2005,00:00:00.000000\nASCII\n",
                         "");
    CHECK_THROWS_WITH_AS(io::load_comtrade_1991_ascii(cfg), "multi-rate not supported",
                         ParseError);

    cfg = write_comtrade(dir,
                         std::string(header) + "1,1A,0D\n1,VA,R,,V,x,0,0,-1,1\n" + tail_1rate +
                             "ASCII\n",
                         "");
    CHECK_THROWS_WITH_AS(io::load_comtrade_1991_ascii(cfg), doctest::Contains("line 3"),
                         ParseError);

    cfg = write_comtrade(dir,
                         std::string(header) + "1,1A,0D\n1,VA,R,,V,1,0,0,-1,1\n" + tail_1rate +
                             "ASCII\n",
                         "1,0,3\n2,400\n");
    CHECK_THROWS_WITH_AS(io::load_comtrade_1991_ascii(cfg), doctest::Contains("dat line 2"),
                         ParseError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("normalize subtracts the mean")
{
    const Record r("x", Unit::dimensionless, 2500, {1, 2, 3});
    const auto n = io::normalize(r);
    CHECK(n[0] == -1.0);
    CHECK(n[1] == 0.0);
    CHECK(n[2] == 1.0);
    CHECK(n.fs() == 2500);

    const auto c = io::normalize(Record("c", Unit::volt, 100, {5, 5, 5}));
    for (double v : c.samples())
        CHECK(v == 0.0);

    std::vector<double> s(2500);
    for (std::size_t k = 0; k < s.size(); ++k)
        s[k] = std::sin(2 * std::numbers::pi * 50 * static_cast<double>(k) / 2500);
    const auto z = io::normalize(Record("s", Unit::volt, 2500, s));
    for (std::size_t k = 0; k < s.size(); ++k)
        CHECK(std::abs(z[k] - s[k]) < 1e-12);
}

TEST_CASE("normalize is idempotent and divide mode divides")
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        auto x = oracle::random_signal(1 + rng() % 200, rng);
        for (auto& v : x)
            v += 3.0;
        const Record r("x", Unit::volt, 1000, x);
        const auto once = io::normalize(r);
        const auto twice = io::normalize(once);
        double scale = 0;
        for (double v : once.samples())
            scale = std::max(scale, std::abs(v));
        for (std::size_t k = 0; k < x.size(); ++k)
            CHECK(std::abs(twice[k] - once[k]) <= 1e-12 * std::max(scale, 1.0));
    }
    const auto d = io::normalize(Record("d", Unit::volt, 1, {2, 4, 6}), io::NormalizeMode::divide_by_mean);
    CHECK(d[0] == doctest::Approx(0.5));
    CHECK(d[2] == doctest::Approx(1.5));
    CHECK_THROWS_AS(io::normalize(Record("z", Unit::volt, 1, {-1, 1}), io::NormalizeMode::divide_by_mean),
                    ConfigError);
}
