# Make this a python package