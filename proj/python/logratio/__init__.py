# Copyright 2026 The logratio Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Dense triplet mining and log-ratio loss for metric learning with continuous labels."""

from ._logratio import (
    DivergenceError,
    ValidationError,
    dcg_at_k,
    dense_triplet_loss,
    embed,
    generate,
    gradcheck,
    ideal_dcg_at_k,
    log_ratio_loss,
    mine_dense,
    ndcg_at_k,
    nearest_neighbors,
    relevance,
    squared_euclidean,
    train_and_evaluate,
    triplet_loss,
)

__all__ = [
    "DivergenceError",
    "ValidationError",
    "dcg_at_k",
    "dense_triplet_loss",
    "embed",
    "generate",
    "gradcheck",
    "ideal_dcg_at_k",
    "log_ratio_loss",
    "mine_dense",
    "ndcg_at_k",
    "nearest_neighbors",
    "relevance",
    "squared_euclidean",
    "train_and_evaluate",
    "triplet_loss",
]
