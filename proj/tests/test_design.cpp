int placeholder_test_design;
