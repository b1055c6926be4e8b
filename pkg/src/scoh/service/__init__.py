"""HTTP service wrapping the toolkit; see :mod:`scoh.service.app`."""
