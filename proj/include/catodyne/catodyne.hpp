#ifndef CATODYNE_CATODYNE_HPP
#define CATODYNE_CATODYNE_HPP

#include "catodyne/errors.hpp"
#include "catodyne/numkernel.hpp"
#include "catodyne/states.hpp"
#include "catodyne/exactclicks.hpp"
#include "catodyne/oracle.hpp"
#include "catodyne/sumdiff.hpp"
#include "catodyne/asymptotics.hpp"
#include "catodyne/remoteprep.hpp"
#include "catodyne/verify.hpp"
#include "catodyne/spec_parse.hpp"
#include "catodyne/io.hpp"

#endif  // CATODYNE_CATODYNE_HPP
