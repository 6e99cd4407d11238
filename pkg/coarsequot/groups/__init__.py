"""Groups submodule: words, presentations and Cayley balls."""

from coarsequot.groups.ball import CayleyBall as CayleyBall
from coarsequot.groups.ball import cayley_ball as cayley_ball
from coarsequot.groups.presentation import Presentation as Presentation
from coarsequot.groups.presentation import PresentationKind as PresentationKind
from coarsequot.groups.words import GroupElement as GroupElement
