#ifndef MSIMAP_MSIMAP_HPP
#define MSIMAP_MSIMAP_HPP

#include "msimap/common.hpp"
#include "msimap/encode.hpp"
#include "msimap/eval.hpp"
#include "msimap/filter_bank.hpp"
#include "msimap/graph.hpp"
#include "msimap/interpret.hpp"
#include "msimap/io.hpp"
#include "msimap/kd_tree.hpp"
#include "msimap/optimize.hpp"
#include "msimap/pipeline.hpp"
#include "msimap/point_cloud.hpp"
#include "msimap/pw_verify.hpp"
#include "msimap/sampling.hpp"
#include "msimap/sgw.hpp"

#endif
