from .units import db_to_linear, linear_to_db
