"""Empty file needed for pytest to find tests directory."""