from __future__ import annotations
from abc import abstractmethod, abstractproperty
from typing import Dict, Iterable, Tuple
from ctp.tree.path import Path, PrefixFunctional
from ctp.utils.datastruct import Label

__all__ = ["TreePresentation"]

class TreePresentation(object):
    """
    TreePresentation describes a computable tree whose infinite paths are the
    elements of a structure, together with the operations of the structure's
    signature as prefix functionals on those paths.
    """
    @abstractproperty
    def name(self) -> str:
        """
        Identifier carried by every path of this presentation.
        """
        pass

    @abstractmethod
    def is_valid(self, node: Tuple[Label, ...]) -> bool:
        """
        Returns True if the finite label sequence is a node of the tree.
        The empty sequence is always a node.
        """
        pass

    @abstractmethod
    def children(self, node: Tuple[Label, ...]) -> Iterable[Label]:
        """
        Returns the labels ``c`` such that ``node + (c,)`` is a node.
        The iterable can be infinite for countably branching trees.
        """
        pass

    @abstractproperty
    def functionals(self) -> Dict[str, PrefixFunctional]:
        """
        Map from the operation symbols to the functionals computing them.
        """
        pass

    @property
    def signature(self) -> Dict[str, int]:
        return {name: fcn.arity for (name, fcn) in self.functionals.items()}

    @property
    def coherent(self) -> bool:
        """
        True if the label at a level determines all the labels below it, so
        that clopen sets can be given by single-level constraints.
        """
        return False

    def labels_at(self, level: int) -> Iterable[Label]:
        """
        All the labels a path can carry at ``level``. Only available for
        coherent presentations.
        """
        raise NotImplementedError(f"{self.name} does not enumerate its labels per level")

    def restrict(self, label: Label, level: int, to_level: int) -> Label:
        """
        The label at ``to_level`` of any path carrying ``label`` at ``level``.
        Only available for coherent presentations.
        """
        raise NotImplementedError(f"{self.name} is not a coherent presentation")

    def extend(self, node: Tuple[Label, ...]) -> Path:
        """
        A path through ``node``, continuing along the first child at every
        level below it.
        """
        node = tuple(node)
        assert self.is_valid(node), f"{node} is not a node of {self.name}"
        labels = list(node)

        def fcn(level: int) -> Label:
            while len(labels) < level:
                labels.append(next(iter(self.children(tuple(labels)))))
            return labels[level - 1]

        return Path(fcn, self.name)

    def perturb(self, path: Path, level: int) -> Path:
        """
        A path agreeing with ``path`` up to ``level`` and differing from it at
        ``level + 1``. Exists because no path of a presentation is isolated.
        """
        node = path.prefix(level)
        current = path.label(level + 1)
        other = next(c for c in self.children(node) if c != current)
        return self.extend(node + (other,))
