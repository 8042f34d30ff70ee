"""dp-cover: private set-cover learners for conjunctions and polygons on a grid."""

__version__ = "0.1.0"
