import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from minitutor.exercises import ExerciseStore


MODEL_SRC = """my_sort = foldr insert []
  where
    insert x [] = [x]
    insert x (y:ys) | x < y     = x:y:ys
                    | otherwise = y:insert x ys
"""

PAPER_PROGRAMS = {
    "model": MODEL_SRC,
    "finished_wrong": "my_sort = foldr (:) []",
    "bad_base": "my_sort = foldr ? [0]",
    "hole_cex": "my_sort [] = []\nmy_sort (x:xs) = x : ?",
    "map_conflict": "my_sort = map ?",
    "map_zip": "my_sort = map ? . zip [0..]",
    "where_f": "my_sort [] = []\nmy_sort (x:xs) = f x (my_sort xs)\n  where f y ys = ?",
    "foldr_holes": "my_sort [] = []\nmy_sort (x:xs) = foldr ? ? xs",
}


@pytest.fixture(scope="session")
def store() -> ExerciseStore:
    return ExerciseStore.load()


@pytest.fixture(scope="session")
def my_sort(store):
    return store.get("my_sort")
