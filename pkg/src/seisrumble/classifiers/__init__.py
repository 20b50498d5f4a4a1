"""From-scratch binary classifiers and their evaluation harness."""

from .dataset import Dataset
from .harness import (CVResult, DEFAULT_REGISTRY, Leaderboard, evaluate, kfold_cv, leaderboard,
                      make_trainer, model_from_dict, predict, split_dataset, stratified_folds,
                      stratified_split)
from .linear import (LinearModel, hinge_objective, logistic_loss_and_grad, predict_proba,
                     train_logistic, train_ridge, train_svm_linear)
from .metrics import EvalReport
from .tree import Node, TreeModel, train_tree

__all__ = [
    "CVResult", "DEFAULT_REGISTRY", "Dataset", "EvalReport", "Leaderboard", "LinearModel",
    "Node", "TreeModel", "evaluate", "hinge_objective", "kfold_cv", "leaderboard",
    "logistic_loss_and_grad", "make_trainer", "model_from_dict", "predict", "predict_proba",
    "split_dataset", "stratified_folds", "stratified_split", "train_logistic", "train_ridge",
    "train_svm_linear", "train_tree",
]
