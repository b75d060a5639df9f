# Copyright 2026 the maskface authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python façade over the _maskface extension module."""

from _maskface import (
    MaskfaceError,
    apply_mask,
    calibrate_and_evaluate,
    cluster,
    mine_triplets,
    sq_l2,
    tilt,
    train_toy,
    triplet_loss,
)

__all__ = [
    "MaskfaceError",
    "apply_mask",
    "calibrate_and_evaluate",
    "cluster",
    "mine_triplets",
    "sq_l2",
    "tilt",
    "train_toy",
    "triplet_loss",
]
