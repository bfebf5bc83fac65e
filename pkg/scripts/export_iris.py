"""Write iris as a CSV with a trailing integer label column (default data/iris.csv)."""

import sys
from pathlib import Path

from sklearn.datasets import load_iris

from ecm.data import Dataset, LabeledDataset, write_dataset_csv

out = Path(sys.argv[1] if len(sys.argv) > 1 else "data/iris.csv")
out.parent.mkdir(parents=True, exist_ok=True)
iris = load_iris()
write_dataset_csv(out, LabeledDataset(Dataset(iris.data), iris.target))
print(out)
