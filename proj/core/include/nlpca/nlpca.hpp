#pragma once

#include "nlpca/checkpoint.hpp"
#include "nlpca/csv.hpp"
#include "nlpca/dataset.hpp"
#include "nlpca/error.hpp"
#include "nlpca/gibbs.hpp"
#include "nlpca/idx.hpp"
#include "nlpca/metrics.hpp"
#include "nlpca/mrf.hpp"
#include "nlpca/pca.hpp"
#include "nlpca/random.hpp"
#include "nlpca/stiefel.hpp"
#include "nlpca/types.hpp"
#include "nlpca/vmf.hpp"
