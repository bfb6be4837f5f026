#include <doctest.h>

#include <sstream>

#include "bifcurrent/grid_io.hpp"
#include "bifcurrent/rng.hpp"

using namespace bifcurrent;

TEST_SUITE_BEGIN("io-formats");

TEST_CASE("grid container round-trips bit for bit") {
  Rng rng(2024);
  GridField field;
  field.rect = {-2.5, 1.5, -1.25, 1.75};
  field.nx = 37;
  field.ny = 23;
  for (int i = 0; i < field.nx * field.ny; ++i) field.values.push_back(rng.uniform(-5, 5));

  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  write_grid(buf, field);

  const std::string bytes = buf.str();
  CHECK(bytes.size() == 32 + 32 + sizeof(double) * field.values.size());
  CHECK(bytes.compare(0, 8, "BFGRID01") == 0);

  const GridField back = read_grid(buf);
  CHECK(back.nx == field.nx);
  CHECK(back.ny == field.ny);
  CHECK(back.rect.re_min == field.rect.re_min);
  CHECK(back.rect.im_max == field.rect.im_max);
  REQUIRE(back.values.size() == field.values.size());
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    CHECK(back.values[i] == field.values[i]);
  }
}

TEST_CASE("grid reader rejects foreign payloads") {
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  buf << "definitely not a grid file at all.............";
  CHECK_THROWS_AS(read_grid(buf), std::runtime_error);
}

TEST_CASE("pgm render is deterministic and well-formed") {
  GridField field;
  field.rect = {0, 1, 0, 1};
  field.nx = 8;
  field.ny = 4;
  for (int i = 0; i < 32; ++i) field.values.push_back(i * 0.1);

  std::stringstream a(std::ios::in | std::ios::out | std::ios::binary);
  std::stringstream b(std::ios::in | std::ios::out | std::ios::binary);
  write_pgm(a, field);
  write_pgm(b, field);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("P5\n", 0) == 0);
  CHECK(a.str().find("8 4\n255\n") != std::string::npos);
  CHECK(a.str().size() > 32);
}

TEST_CASE("cloud csv headers by dimension") {
  AtomCloud c1;
  c1.dim = 1;
  c1.atoms = {{Complex{1, 2}, Complex{}, 0.5}};
  std::ostringstream os1;
  write_cloud_csv(os1, c1);
  CHECK(os1.str() == "re,im,weight\n1,2,0.5\n");

  AtomCloud c2;
  c2.dim = 2;
  c2.atoms = {{Complex{1, 0}, Complex{0, -1}, 1.0}};
  std::ostringstream os2;
  write_cloud_csv(os2, c2);
  CHECK(os2.str() == "c_re,c_im,z_re,z_im,weight\n1,0,0,-1,1\n");
}

TEST_SUITE_END();
