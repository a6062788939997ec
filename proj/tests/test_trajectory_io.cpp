#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "twoscale/error.hpp"
#include "twoscale/trajectory_io.hpp"

namespace twoscale {
namespace {

namespace fs = std::filesystem;

class TrajectoryIo : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("twoscale_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    void write_text(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

    fs::path dir_;
};

Trajectory sample() {
    return Trajectory(2, 1e-3, 0.25, 123456789012345ULL, "quad2d", {0.1, -0.2, 1.0 / 3.0, 2e-17, -5.5e10, 7.0});
}

void expect_same(const TrajectoryFile& file, const Trajectory& traj, const TrajectoryMeta& meta) {
    const auto& t = file.trajectory;
    EXPECT_EQ(t.dimension(), traj.dimension());
    EXPECT_EQ(t.size(), traj.size());
    EXPECT_EQ(t.dt(), traj.dt());
    EXPECT_EQ(t.t0(), traj.t0());
    EXPECT_EQ(t.seed(), traj.seed());
    EXPECT_EQ(t.model_tag(), traj.model_tag());
    EXPECT_TRUE(std::equal(t.data().begin(), t.data().end(), traj.data().begin(), traj.data().end()));
    EXPECT_EQ(file.meta.epsilon, meta.epsilon);
    EXPECT_EQ(file.meta.sigma, meta.sigma);
}

TEST_F(TrajectoryIo, CsvRoundTripIsExact) {
    const TrajectoryMeta meta{0.1, 0.5};
    write_trajectory(path("t.csv"), sample(), meta);
    expect_same(read_trajectory(path("t.csv")), sample(), meta);
}

TEST_F(TrajectoryIo, BinaryRoundTripIsExact) {
    const TrajectoryMeta meta{0.05, 0.25};
    write_trajectory(path("t.bin"), sample(), meta);
    expect_same(read_trajectory(path("t.bin")), sample(), meta);
}

TEST_F(TrajectoryIo, CsvLayout) {
    write_trajectory(path("t.csv"), Trajectory(1, 0.5, 0.0, 1, "ou", {1.0, 2.0}), {0.1, 0.5});
    std::ifstream in(path("t.csv"));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "# twoscale-trajectory v1");
    std::getline(in, line);
    EXPECT_TRUE(line.starts_with("# model=ou "));
    std::getline(in, line);
    EXPECT_EQ(line, "x1");
    std::getline(in, line);
    EXPECT_EQ(line, "1");
}

TEST_F(TrajectoryIo, MissingFile) {
    EXPECT_THROW(read_trajectory(path("absent.csv")), FileError);
    EXPECT_THROW(read_trajectory(path("absent.bin")), FileError);
    EXPECT_THROW(write_trajectory(path("no/such/dir/t.csv"), sample(), {0.1, 0.5}), FileError);
}

TEST_F(TrajectoryIo, MalformedCsv) {
    write_text("a.csv", "x1\n1\n");
    EXPECT_THROW(read_trajectory(path("a.csv")), FileError);

    const std::string head = "# twoscale-trajectory v1\n";
    write_text("b.csv", head + "# model=ou epsilon=0.1 sigma=0.5 dt=0.01 seed=1 t0=0\nx1\n1\n");
    EXPECT_THROW(read_trajectory(path("b.csv")), FileError);

    const std::string meta = "# model=ou epsilon=0.1 sigma=0.5 dt=0.01 seed=1 t0=0 dimension=1\nx1\n";
    write_text("c.csv", head + meta + "1\n2,3\n");
    EXPECT_THROW(read_trajectory(path("c.csv")), FileError);
    write_text("d.csv", head + meta + "1\nabc\n");
    EXPECT_THROW(read_trajectory(path("d.csv")), FileError);
    write_text("e.csv", head + meta + "1\n2\n");
    EXPECT_EQ(read_trajectory(path("e.csv")).trajectory.size(), 2u);
}

TEST_F(TrajectoryIo, TruncatedBinary) {
    write_trajectory(path("t.bin"), sample(), {0.1, 0.5});
    const auto full = fs::file_size(path("t.bin"));
    fs::resize_file(path("t.bin"), full - 8);
    EXPECT_THROW(read_trajectory(path("t.bin")), FileError);
    write_text("junk.bin", "NOTMAGIC and more");
    EXPECT_THROW(read_trajectory(path("junk.bin")), FileError);
}

}  // namespace
}  // namespace twoscale
