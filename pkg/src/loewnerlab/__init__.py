"""Multi-slit chordal Loewner flows with multiple-SLE driving.

Modules: :mod:`measures`, :mod:`drivers`, :mod:`loewner`, :mod:`burgers`,
:mod:`dyck`, :mod:`scenarios` and the command line in :mod:`cli`.
"""
__version__ = "0.1.0"
