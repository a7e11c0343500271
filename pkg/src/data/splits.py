"""Seeded k-fold splitting of the supervised set."""

from typing import List, Tuple

import numpy as np

from src.data.records import Dataset
from src.errors import ContractError


def kfold_split(dataset: Dataset, k: int, seed: int) -> List[Tuple[Dataset, Dataset]]:
    """Partition X_s into ``k`` folds; each test fold pairs with the rest plus all of X_u.

    Fold sizes differ by at most one, larger folds first.
    """
    n = len(dataset.supervised)
    if k < 2:
        raise ContractError(f"k must be at least 2, got {k}")
    if k > n:
        raise ContractError(f"cannot split {n} supervised examples into {k} folds")
    order = np.random.default_rng(seed).permutation(n)
    folds = np.array_split(order, k)
    splits = []
    for i, test_idx in enumerate(folds):
        train_idx = np.concatenate([f for j, f in enumerate(folds) if j != i])
        train = Dataset(tuple(dataset.supervised[t] for t in sorted(train_idx)), dataset.unsupervised,
                        language=dataset.language)
        test = Dataset(tuple(dataset.supervised[t] for t in sorted(test_idx)), (), language=dataset.language)
        splits.append((train, test))
    return splits
