# Make it a python package