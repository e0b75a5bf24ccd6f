# Make this a python Module