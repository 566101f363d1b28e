#include "adpdtc/error.hpp"
#include "adpdtc/series_io.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace adpdtc;

TEST(SeriesIo, DiscreteRoundTripIsExact) {
  DiscreteSignal s;
  s.first_n = 0;
  s.period = 407.5e-6;
  s.t_offset = 1e-5;
  s.values = {1.0, -0.987654321012345, 0.1 + 0.2, -1e-300};
  std::stringstream ss;
  io::write_discrete_csv(ss, s);
  EXPECT_EQ(ss.str().substr(0, 8), "N,t_s,S\n");
  const auto back = io::read_discrete_csv(ss);
  EXPECT_EQ(back.first_n, 0);
  EXPECT_EQ(back.values, s.values);
  EXPECT_NEAR(back.period, s.period, 1e-18);
  EXPECT_NEAR(back.t_offset, s.t_offset, 1e-18);
}

TEST(SeriesIo, TimeSeriesAndSpectrumHeaders) {
  TimeSeries t;
  t.dt = 5e-6;
  t.values = {1.0, 0.5};
  std::stringstream ss;
  io::write_time_series_csv(ss, t);
  EXPECT_EQ(ss.str(), "t_s,value\n0,1\n5.0000000000000004e-06,0.5\n");
  const auto back = io::read_time_series_csv(ss);
  EXPECT_EQ(back.values, t.values);

  Spectrum sp;
  sp.frequencies = {-1.0, 0.0};
  sp.amplitudes = {{1.0, 0.0}, {2.0, -1.0}};
  std::stringstream s2;
  io::write_spectrum_csv(s2, sp);
  EXPECT_EQ(s2.str(), "freq_Hz,re,im\n-1,1,0\n0,2,-1\n");
}

TEST(SeriesIo, FCurveAndBoundaries) {
  std::stringstream ss;
  io::write_f_curve_csv(ss, {3.0, 3.1}, {0.2, 0.9});
  const auto [th, f] = io::read_f_curve_csv(ss);
  EXPECT_EQ(th, (std::vector<double>{3.0, 3.1}));
  EXPECT_EQ(f, (std::vector<double>{0.2, 0.9}));
  EXPECT_THROW(io::write_f_curve_csv(ss, {1.0}, {}), InvalidArgument);
  std::stringstream b;
  io::write_boundary_csv(b, {{20e-6, 3.0, 3.3, 0.5}});
  EXPECT_EQ(b.str(), "tau_s,theta_left,theta_right,cutoff\n2.0000000000000002e-05,3,3.2999999999999998,0.5\n");
}

TEST(SeriesIo, MalformedInput) {
  std::stringstream gap("N,t_s,S\n1,0.1,1\n3,0.3,1\n");
  EXPECT_THROW(io::read_discrete_csv(gap), IoError);
  std::stringstream empty("N,t_s,S\n");
  EXPECT_THROW(io::read_discrete_csv(empty), IoError);
  std::stringstream junk("t_s,value\n0,1\nabc,2\n");
  EXPECT_THROW(io::read_time_series_csv(junk), IoError);
  std::stringstream uneven("0,1\n1,1\n3,1\n");
  EXPECT_THROW(io::read_time_series_csv(uneven), IoError);
  EXPECT_THROW(io::read_text_file("/nonexistent/x"), IoError);
}
